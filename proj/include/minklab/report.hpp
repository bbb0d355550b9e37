#pragma once

#include <optional>
#include <string>

namespace minklab {

// One named residual with the scale used for relative comparison.  scale is
// the quadrature of the absolute values of the identity's terms, so
// |value| / scale is dimensionless and shape-independent.
struct ResidualReport {
  std::string name;
  double value = 0.0;
  double scale = 1.0;
  std::string resolution;
  std::optional<double> order;      // measured refinement slope when available
  std::optional<double> condition;  // worst matrix condition met while forming the integrand

  double relative() const;
  bool pass(double tol) const { return relative() <= tol; }
  std::string to_jsonl() const;
};

}  // namespace minklab
