#pragma once

#include <cmath>
#include <stdexcept>

// Real spherical harmonics on S^2 and Fourier modes on S^1, normalized to
// unit L2 norm against the standard area measure.  Used for perturbation
// bases and as Laplacian eigenfunction oracles in tests.

namespace minklab::harmonics {

// Associated Legendre P_l^m(x) without Condon-Shortley phase, m >= 0.
inline double legendre_p(int l, int m, double x) {
  if (m < 0 || m > l) throw std::invalid_argument("legendre_p: need 0 <= m <= l");
  double pmm = 1.0;
  if (m > 0) {
    const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= fact * somx2;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

// Real Y_{l,m}(theta, phi); m > 0 pairs with cos(m phi), m < 0 with
// sin(|m| phi).  Integral of Y^2 over S^2 is 1.
inline double real_sph(int l, int m, double theta, double phi) {
  constexpr double kPi = 3.14159265358979323846;
  const int am = m < 0 ? -m : m;
  double lognum = 0.0;
  for (int i = l - am + 1; i <= l + am; ++i) lognum += std::log(double(i));
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * std::exp(-lognum));
  const double p = legendre_p(l, am, std::cos(theta));
  if (m == 0) return norm * p;
  const double sqrt2 = std::sqrt(2.0);
  return m > 0 ? sqrt2 * norm * p * std::cos(am * phi) : sqrt2 * norm * p * std::sin(am * phi);
}

// Unit-norm Fourier mode on S^1; m >= 1, kind 0 -> cos, 1 -> sin.
inline double circle_mode(int m, int kind, double theta) {
  constexpr double kPi = 3.14159265358979323846;
  const double norm = 1.0 / std::sqrt(kPi);
  return kind == 0 ? norm * std::cos(m * theta) : norm * std::sin(m * theta);
}

}  // namespace minklab::harmonics
