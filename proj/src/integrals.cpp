#include "minklab/integrals.hpp"

#include <cmath>

#include "minklab/symfun.hpp"

namespace minklab::integrals {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Eigen::MatrixXd small_inverse(const Eigen::MatrixXd& w) {
  if (w.rows() == 1) {
    Eigen::MatrixXd inv(1, 1);
    inv(0, 0) = 1.0 / w(0, 0);
    return inv;
  }
  Eigen::MatrixXd inv(2, 2);
  const double det = w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0);
  inv << w(1, 1), -w(0, 1), -w(1, 0), w(0, 0);
  return inv / det;
}

}  // namespace

RadialWeight RadialWeight::one() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, "1"};
}

RadialWeight RadialWeight::power(double alpha) {
  return {[alpha](double r) { return std::pow(r, alpha); },
          [alpha](double r) { return alpha * std::pow(r, alpha - 1.0); },
          "r^" + std::to_string(alpha)};
}

ResidualReport minkowski_residual(const SupportBody& body, int k) {
  const int n = body.dim();
  if (k < 0 || k > n - 1) throw std::invalid_argument("minkowski_residual: need 0 <= k <= n-1");
  const auto& grid = *body.grid;
  // u P_{k+1}(kappa) dmu reduces to u P_{n-k-1}(W) dsigma: the sigma_n factor
  // of the measure cancels the P_n(W) denominator of the curvature quotient
  Eigen::VectorXd pos(grid.size()), neg(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto p = symfun::elem_sym(body.W.dense(i));
    pos[i] = body.u[i] * p[n - k - 1];
    neg[i] = p[n - k];
  }
  ResidualReport rep;
  rep.name = "minkowski[k=" + std::to_string(k) + "]";
  rep.value = grid.quadrature(pos - neg);
  rep.scale = grid.quadrature(pos.cwiseAbs()) + grid.quadrature(neg.cwiseAbs());
  rep.resolution = grid.resolution();
  return rep;
}

ResidualReport chern_two_body_residual(const std::shared_ptr<const SphericalGrid>& grid,
                                       const Eigen::VectorXd& u, const Eigen::VectorXd& ubar,
                                       int k, int l, ChernVariant v) {
  const int n = grid->dim();
  if (k < 0 || l < 0 || k + l > n - 1)
    throw std::invalid_argument("chern_two_body_residual: need 0 <= k+l <= n-1");
  if (u.size() != grid->size() || ubar.size() != grid->size())
    throw std::invalid_argument("chern_two_body_residual: grid mismatch");

  const SymField w = curvature_matrix(*grid, u);
  const SymField wb = curvature_matrix(*grid, ubar);

  Eigen::VectorXd pos(grid->size()), neg(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const Eigen::MatrixXd a = w.dense(i);
    const Eigen::MatrixXd b = wb.dense(i);
    switch (v) {
      case ChernVariant::V20:
        pos[i] = ubar[i] * symfun::mixed_pair(a, b, k, l);
        neg[i] = symfun::mixed_pair(a, b, k, l + 1);
        break;
      case ChernVariant::V21:
        pos[i] = u[i] * symfun::mixed_pair(a, b, k, l);
        neg[i] = symfun::mixed_pair(a, b, k + 1, l);
        break;
      case ChernVariant::V22:
        pos[i] = ubar[i] * symfun::mixed_pair(a, b, k + 1, l);
        neg[i] = u[i] * symfun::mixed_pair(a, b, k, l + 1);
        break;
    }
  }
  ResidualReport rep;
  const char* tag = v == ChernVariant::V20 ? "2.20" : v == ChernVariant::V21 ? "2.21" : "2.22";
  rep.name = std::string("chern[") + tag + ",k=" + std::to_string(k) + ",l=" + std::to_string(l) +
             "]";
  rep.value = grid->quadrature(pos - neg);
  rep.scale = grid->quadrature(pos.cwiseAbs()) + grid->quadrature(neg.cwiseAbs());
  rep.resolution = grid->resolution();
  return rep;
}

ResidualReport chern_two_body_residual(const SupportBody& a, const SupportBody& b, int k, int l,
                                       ChernVariant v) {
  if (a.grid != b.grid && a.grid->resolution() != b.grid->resolution())
    throw std::invalid_argument("chern_two_body_residual: bodies on different grids");
  return chern_two_body_residual(a.grid, a.u, b.u, k, l, v);
}

ResidualReport radial_weighted_residual(const SupportBody& body, const RadialWeight& eta, int k,
                                        RadialVariant v, const SupportBody* other) {
  const int n = body.dim();
  if (k < 0 || k > n - 1)
    throw std::invalid_argument("radial_weighted_residual: need 0 <= k <= n-1");
  if ((v == RadialVariant::V25 || v == RadialVariant::V26) && other == nullptr)
    throw std::invalid_argument("radial_weighted_residual: two-body variant needs a second body");
  const auto& grid = *body.grid;
  if (other && other->grid->resolution() != grid.resolution())
    throw std::invalid_argument("radial_weighted_residual: grid mismatch");

  const double front = factorial(n - k - 1) / factorial(n);
  Eigen::VectorXd lhs_pos(grid.size()), lhs_neg(grid.size()), rhs(grid.size());
  double max_cond = 1.0;

  for (int i = 0; i < grid.size(); ++i) {
    if (v == RadialVariant::V27) {
      // single body: curvature quotients through W^{-1}, tau = grad u
      const Eigen::MatrixXd winv = small_inverse(body.W.dense(i));
      const double dens = body.area_density[i];
      const double r = body.r[i];
      if (!std::isfinite(eta.f(r)) || !std::isfinite(eta.df(r)))
        throw std::domain_error("radial_weighted_residual: eta not finite on the r-range");
      const Eigen::VectorXd tau = body.grad.row(i).transpose();
      lhs_pos[i] = eta.f(r) * body.u[i] * symfun::p_k(winv, k + 1) * dens;
      lhs_neg[i] = eta.f(r) * symfun::p_k(winv, k) * dens;
      rhs[i] = front * eta.df(r) / r * symfun::delta_weighted_sum(tau, tau, winv, k) * dens;
    } else {
      // V25 weights with eta(rbar) against dmubar and a = W Wbar^{-1};
      // V26 swaps the roles of the two bodies.
      const bool v25 = v == RadialVariant::V25;
      const SupportBody& prim = v25 ? body : *other;  // contributes W in a = W Wbar^{-1}
      const SupportBody& meas = v25 ? *other : body;  // carries the measure and the weight
      const Eigen::MatrixXd wp = prim.W.dense(i);
      const Eigen::MatrixXd wm = meas.W.dense(i);
      max_cond = std::max(max_cond, meas.radii.row(i).maxCoeff() / meas.radii.row(i).minCoeff());
      const Eigen::MatrixXd a = wp * small_inverse(wm);
      const double dens = meas.area_density[i];
      const double rm = meas.r[i];
      if (!std::isfinite(eta.f(rm)) || !std::isfinite(eta.df(rm)))
        throw std::domain_error("radial_weighted_residual: eta not finite on the r-range");
      const Eigen::VectorXd tau_p = prim.grad.row(i).transpose();
      const Eigen::VectorXd tau_m = meas.grad.row(i).transpose();
      lhs_pos[i] = eta.f(rm) * meas.u[i] * symfun::p_k(a, k + 1) * dens;
      lhs_neg[i] = eta.f(rm) * prim.u[i] * symfun::p_k(a, k) * dens;
      // the mixed weight sits on the slot paired with the row index of a
      const Eigen::VectorXd mix = prim.u[i] * tau_m - meas.u[i] * tau_p;
      rhs[i] = front * eta.df(rm) / rm * symfun::delta_weighted_sum(mix, tau_m, a, k) * dens;
    }
  }

  ResidualReport rep;
  const char* tag = v == RadialVariant::V25 ? "2.25" : v == RadialVariant::V26 ? "2.26" : "2.27";
  rep.name = std::string("radial[") + tag + ",k=" + std::to_string(k) + ",eta=" + eta.label + "]";
  rep.value = grid.quadrature(lhs_pos - lhs_neg) - grid.quadrature(rhs);
  rep.scale = grid.quadrature(lhs_pos.cwiseAbs()) + grid.quadrature(lhs_neg.cwiseAbs()) +
              grid.quadrature(rhs.cwiseAbs());
  rep.resolution = grid.resolution();
  if (v != RadialVariant::V27) rep.condition = max_cond;
  return rep;
}

ResidualReport weighted_minkowski_residual(const SupportBody& body, const Eigen::VectorXd& phi,
                                           int k) {
  const int n = body.dim();
  if (k < 0 || k > n - 1)
    throw std::invalid_argument("weighted_minkowski_residual: need 0 <= k <= n-1");
  const auto& grid = *body.grid;
  if (phi.size() != grid.size())
    throw std::invalid_argument("weighted_minkowski_residual: field size mismatch");

  const Eigen::MatrixXd gphi = grid.gradient(phi);
  const double cnk = (n - k) * symfun::binom(n, k);

  Eigen::VectorXd t1(grid.size()), t2_pos(grid.size()), t2_neg(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::MatrixXd s = small_inverse(body.W.dense(i));  // shape operator
    const Eigen::VectorXd tau = body.grad.row(i).transpose();
    const Eigen::VectorXd gm = s * gphi.row(i).transpose();  // gradient along M
    const double dens = body.area_density[i];
    t1[i] = tau.dot(symfun::newton_tensor(s, k) * gm) * dens;
    const auto p = symfun::elem_sym(body.W.dense(i));
    t2_pos[i] = cnk * body.u[i] * p[n - k - 1] * phi[i];
    t2_neg[i] = cnk * p[n - k] * phi[i];
  }
  ResidualReport rep;
  rep.name = "weighted_minkowski[k=" + std::to_string(k) + "]";
  rep.value = grid.quadrature(t1 - t2_pos + t2_neg);
  rep.scale = grid.quadrature(t1.cwiseAbs()) + grid.quadrature(t2_pos.cwiseAbs()) +
              grid.quadrature(t2_neg.cwiseAbs());
  rep.resolution = grid.resolution();
  return rep;
}

}  // namespace minklab::integrals
