#pragma once

#include <functional>
#include <optional>

#include "minklab/body.hpp"
#include "minklab/report.hpp"

// Integral identities for closed strictly convex hypersurfaces, evaluated in
// the support-function pullback: curvature quantities come from W, the area
// measure is sigma_n(W) dsigma, and P_j of the principal curvatures is
// P_{n-j}(W) / P_n(W).  Every function returns the signed defect of an
// identity whose exact value is zero, together with the scale used for
// relative comparison (quadrature of the absolute terms).

namespace minklab::integrals {

// scalar weight eta(r) with derivative
struct RadialWeight {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::string label;

  static RadialWeight one();
  static RadialWeight power(double alpha);  // r^alpha
};

enum class ChernVariant { V20, V21, V22 };
enum class RadialVariant { V25, V26, V27 };

// Minkowski formula: integral of (u P_{k+1}(kappa) - P_k(kappa)) dmu,
// 0 <= k <= n-1.
ResidualReport minkowski_residual(const SupportBody& body, int k);

// Two-function identities on mixed forms of W and Wbar, 0 <= k+l <= n-1:
//   V20: integral of (ubar P_{k,l} - P_{k,l+1}) dsigma
//   V21: integral of (u    P_{k,l} - P_{k+1,l}) dsigma
//   V22: integral of (ubar P_{k+1,l} - u P_{k,l+1}) dsigma
// The identities hold for arbitrary C^2 functions, so a raw-field overload
// is provided that skips the convexity checks.
ResidualReport chern_two_body_residual(const SupportBody& a, const SupportBody& b, int k, int l,
                                       ChernVariant v);
ResidualReport chern_two_body_residual(const std::shared_ptr<const SphericalGrid>& grid,
                                       const Eigen::VectorXd& u, const Eigen::VectorXd& ubar,
                                       int k, int l, ChernVariant v);

// Radially weighted identities, 0 <= k <= n-1.  V25 and V26 compare two
// bodies through a = W Wbar^{-1} (resp. abar = Wbar W^{-1}); V27 is the
// single-body form that reduces to the Minkowski formula when eta == 1.
ResidualReport radial_weighted_residual(const SupportBody& body, const RadialWeight& eta, int k,
                                        RadialVariant v, const SupportBody* other = nullptr);

// Integrated Newton-tensor identity: for S = W^{-1},
//   integral of  grad(u) . T^k(S) grad^M(Phi) dmu
//     - (n-k) C(n,k) integral of (u P_{k+1}(kappa) - P_k(kappa)) Phi dmu
// where grad^M(Phi) = W^{-1} grad(Phi).
ResidualReport weighted_minkowski_residual(const SupportBody& body, const Eigen::VectorXd& phi,
                                           int k);

}  // namespace minklab::integrals
