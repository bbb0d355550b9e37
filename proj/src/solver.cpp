#include "minklab/solver.hpp"

#include <Eigen/SparseLU>

#include <atomic>
#include <cmath>
#include <thread>

#include "minklab/symfun.hpp"

namespace minklab::solver {

namespace {

// per-node fields of the linearization
//   dF = c0 du + cg . grad(du) + M : Hess(du)
// (the du g0 part of dW is folded into c0 as trace(M))
struct LinCoef {
  Eigen::VectorXd c0;
  Eigen::MatrixXd cg;                  // size x dim
  Eigen::VectorXd m00, m01, m11;       // contraction matrix field (m01/m11 unused when dim==1)
};

struct NodeData {
  SymField w;
  Eigen::MatrixXd grad;
  Eigen::VectorXd r;
};

NodeData node_data(const SphericalGrid& grid, const Eigen::VectorXd& u) {
  NodeData d;
  d.w = curvature_matrix(grid, u);
  d.grad = grid.gradient(u);
  d.r.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    d.r[i] = std::sqrt(u[i] * u[i] + d.grad.row(i).squaredNorm());
  return d;
}

double log_or_throw(double x, const char* what) {
  if (!(x > 0.0)) throw std::domain_error(std::string("residual: nonpositive ") + what);
  return std::log(x);
}

}  // namespace

Callable1 Callable1::one() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, "1"};
}
Callable1 Callable1::power(double a) {
  return {[a](double s) { return std::pow(s, a); },
          [a](double s) { return a * std::pow(s, a - 1.0); },
          "s^" + std::to_string(a)};
}
Callable1 Callable1::exp_neg() {
  return {[](double s) { return std::exp(-s); }, [](double s) { return -std::exp(-s); }, "e^-s"};
}

Callable2 Callable2::one() {
  return {[](double, double) { return 1.0; }, [](double, double) { return 0.0; },
          [](double, double) { return 0.0; }, "1"};
}
Callable2 Callable2::power(double a, double b) {
  return {[a, b](double u, double r) { return std::pow(u, a) * std::pow(r, b); },
          [a, b](double u, double r) { return a * std::pow(u, a - 1.0) * std::pow(r, b); },
          [a, b](double u, double r) { return b * std::pow(u, a) * std::pow(r, b - 1.0); },
          "u^" + std::to_string(a) + " r^" + std::to_string(b)};
}

std::string family_name(Family f) {
  switch (f) {
    case Family::OrliczCM: return "orlicz_cm";
    case Family::QuotientIsotropic: return "quotient";
    case Family::LpDual: return "lp_dual";
    case Family::LpGauss: return "lp_gauss";
    case Family::LpDualCM: return "lp_dual_cm";
  }
  throw std::logic_error("unreachable");
}

Family family_from_name(const std::string& name) {
  if (name == "orlicz_cm") return Family::OrliczCM;
  if (name == "quotient") return Family::QuotientIsotropic;
  if (name == "lp_dual") return Family::LpDual;
  if (name == "lp_gauss") return Family::LpGauss;
  if (name == "lp_dual_cm") return Family::LpDualCM;
  throw std::invalid_argument("unknown family: " + name);
}

ProblemSpec ProblemSpec::lp_dual(int n, double p, double q) {
  ProblemSpec s;
  s.n = n;
  s.family = Family::LpDual;
  s.k = n;
  s.p = p;
  s.q = q;
  return s;
}

ProblemSpec ProblemSpec::lp_gauss(int n, double p) {
  ProblemSpec s;
  s.n = n;
  s.family = Family::LpGauss;
  s.k = n;
  s.p = p;
  return s;
}

ProblemSpec ProblemSpec::lp_dual_cm(int n, int k, double p, double q) {
  ProblemSpec s;
  s.n = n;
  s.family = Family::LpDualCM;
  s.k = k;
  s.p = p;
  s.q = q;
  return s;
}

ProblemSpec ProblemSpec::orlicz_cm(int n, int k, Callable1 phi) {
  ProblemSpec s;
  s.n = n;
  s.family = Family::OrliczCM;
  s.k = k;
  s.phi = std::move(phi);
  return s;
}

ProblemSpec ProblemSpec::quotient(int n, int k, int l, Callable2 psi) {
  ProblemSpec s;
  s.n = n;
  s.family = Family::QuotientIsotropic;
  s.k = k;
  s.l = l;
  s.psi = std::move(psi);
  return s;
}

int ProblemSpec::cone_order() const {
  switch (family) {
    case Family::LpDual:
    case Family::LpGauss: return n;
    case Family::OrliczCM:
    case Family::QuotientIsotropic:
    case Family::LpDualCM: return k;
  }
  throw std::logic_error("unreachable");
}

std::optional<double> ProblemSpec::exact_sphere_radius() const {
  auto scalar_root = [](const std::function<double(double)>& h) -> std::optional<double> {
    // first sign change over a log-spaced scan, then bisection
    double prev_x = 1e-3, prev_v = h(prev_x);
    for (int i = 1; i <= 600; ++i) {
      const double x = 1e-3 * std::pow(10.0, i / 100.0);
      const double v = h(x);
      if (std::isfinite(v) && std::isfinite(prev_v) && prev_v * v <= 0.0) {
        double lo = prev_x, hi = x;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (h(lo) * h(mid) <= 0.0)
            hi = mid;
          else
            lo = mid;
        }
        return 0.5 * (lo + hi);
      }
      prev_x = x;
      prev_v = v;
    }
    return std::nullopt;
  };

  switch (family) {
    case Family::LpDual:
      return 1.0;  // R^{q-p} = 1; on the p = q line every radius works
    case Family::LpGauss: {
      const double e = n + 1 - p;
      return scalar_root([e](double r) { return e * std::log(r) - 0.5 * r * r; });
    }
    case Family::LpDualCM: {
      const double c = symfun::binom(n, k);
      if (p == q) return c == 1.0 ? std::optional<double>(1.0) : std::nullopt;
      return std::pow(c, -1.0 / (q - p));
    }
    case Family::OrliczCM: {
      const auto& g = phi;
      const int kk = k;
      return scalar_root([&g, kk](double r) { return std::log(g.f(r)) + kk * std::log(r); });
    }
    case Family::QuotientIsotropic: {
      const auto& g = psi;
      return scalar_root([&g](double r) { return r - g.f(r, r); });
    }
  }
  return std::nullopt;
}

namespace {

double contract(const LinCoef& c, const SymField& h, int i, int dim) {
  if (dim == 1) return c.m00[i] * h.comp(i, 0);
  return c.m00[i] * h.comp(i, 0) + 2.0 * c.m01[i] * h.comp(i, 1) + c.m11[i] * h.comp(i, 2);
}

// residual and linearization coefficients share all per-node algebra
void family_terms(const ProblemSpec& spec, const SphericalGrid& grid, const Eigen::VectorXd& u,
                  const NodeData& nd, Eigen::VectorXd* res, LinCoef* lin) {
  const int n = spec.n;
  const int dim = grid.dim();
  if (dim != n) throw std::invalid_argument("spec dimension does not match the grid");
  const int sz = grid.size();
  if (spec.f.size() != 0 && spec.f.size() != sz)
    throw std::invalid_argument("data field f has the wrong size");

  if (res) res->resize(sz);
  if (lin) {
    lin->c0 = Eigen::VectorXd::Zero(sz);
    lin->cg = Eigen::MatrixXd::Zero(sz, dim);
    lin->m00 = Eigen::VectorXd::Zero(sz);
    lin->m01 = Eigen::VectorXd::Zero(sz);
    lin->m11 = Eigen::VectorXd::Zero(sz);
  }

  const int cone = spec.cone_order();
  for (int i = 0; i < sz; ++i) {
    const Eigen::MatrixXd w = nd.w.dense(i);
    const auto sig = symfun::sigma_all(w);
    for (int j = 1; j <= cone; ++j)
      if (!(sig[j] > 0.0))
        throw std::domain_error("residual: iterate left the Gamma_" + std::to_string(cone) +
                                " cone");
    const double r = nd.r[i];
    const double ui = u[i];
    if (!(ui > 0.0)) throw std::domain_error("residual: nonpositive support function");

    double value = 0.0;
    double c0 = 0.0;
    Eigen::VectorXd cg = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    const Eigen::VectorXd gu = nd.grad.row(i).transpose();

    switch (spec.family) {
      case Family::LpDual: {
        value = (1.0 - spec.p) * std::log(ui) + (spec.q - n - 1.0) * std::log(r) +
                log_or_throw(sig[n], "det W");
        c0 = (1.0 - spec.p) / ui + (spec.q - n - 1.0) * ui / (r * r);
        cg = (spec.q - n - 1.0) / (r * r) * gu;
        m = symfun::newton_tensor(w, n - 1) / sig[n];
        break;
      }
      case Family::LpGauss: {
        value = (1.0 - spec.p) * std::log(ui) - 0.5 * r * r + log_or_throw(sig[n], "det W");
        c0 = (1.0 - spec.p) / ui - ui;
        cg = -gu;
        m = symfun::newton_tensor(w, n - 1) / sig[n];
        break;
      }
      case Family::LpDualCM: {
        value = (1.0 - spec.p) * std::log(ui) + (spec.q - spec.k - 1.0) * std::log(r) +
                log_or_throw(sig[spec.k], "sigma_k W");
        c0 = (1.0 - spec.p) / ui + (spec.q - spec.k - 1.0) * ui / (r * r);
        cg = (spec.q - spec.k - 1.0) / (r * r) * gu;
        m = symfun::newton_tensor(w, spec.k - 1) / sig[spec.k];
        break;
      }
      case Family::OrliczCM: {
        const double pk = sig[spec.k] / symfun::binom(n, spec.k);
        value = log_or_throw(spec.phi.f(ui), "phi(u)") + log_or_throw(pk, "P_k W");
        c0 = spec.phi.df(ui) / spec.phi.f(ui);
        m = symfun::newton_tensor(w, spec.k - 1) / sig[spec.k];
        break;
      }
      case Family::QuotientIsotropic: {
        const double om = 1.0 / double(spec.k - spec.l);
        const double pk = sig[spec.k] / symfun::binom(n, spec.k);
        const double pl = sig[spec.l] / symfun::binom(n, spec.l);
        const double psi = spec.psi.f(ui, r);
        value = om * (log_or_throw(pk, "P_k W") - log_or_throw(pl, "P_l W")) -
                log_or_throw(psi, "psi(u,r)");
        m = om * (symfun::newton_tensor(w, spec.k - 1) / sig[spec.k]);
        if (spec.l >= 1) m -= om * (symfun::newton_tensor(w, spec.l - 1) / sig[spec.l]);
        const double dpsi_u = spec.psi.d1(ui, r) / psi;
        const double dpsi_r = spec.psi.d2(ui, r) / psi;
        c0 = -dpsi_u - dpsi_r * ui / r;
        cg = -dpsi_r / r * gu;
        break;
      }
    }

    if (spec.f.size() != 0) value -= log_or_throw(spec.f[i], "data f");

    if (res) (*res)[i] = value;
    if (lin) {
      lin->c0[i] = c0 + m.trace();
      lin->cg.row(i) = cg.transpose();
      lin->m00[i] = m(0, 0);
      if (dim == 2) {
        lin->m01[i] = 0.5 * (m(0, 1) + m(1, 0));
        lin->m11[i] = m(1, 1);
      }
    }
  }
}

Eigen::SparseMatrix<double> assemble_jacobian(const SphericalGrid& grid, const LinCoef& c) {
  const auto& fd = grid.fd_ops();
  const int sz = grid.size();
  Eigen::SparseMatrix<double> j(sz, sz);
  if (grid.dim() == 1) {
    j = c.cg.col(0).asDiagonal() * fd.d1;
    j += Eigen::SparseMatrix<double>(c.m00.asDiagonal() * fd.d2);
  } else {
    Eigen::VectorXd sin_t(sz), cos_t(sz);
    for (int i = 0; i < sz; ++i) {
      cos_t[i] = grid.nodes()(i, 2);
      sin_t[i] = std::sqrt(std::max(0.0, 1.0 - cos_t[i] * cos_t[i]));
    }
    // frame Hessian in raw coordinate operators:
    //   H_tt = d2, H_tp = d1phi/s - (c/s^2) dphi, H_pp = dphi2/s^2 + (c/s) d1
    Eigen::VectorXd a1 = c.cg.col(0) + c.m11.cwiseProduct(cos_t.cwiseQuotient(sin_t));
    Eigen::VectorXd aphi = c.cg.col(1).cwiseQuotient(sin_t) -
                           2.0 * c.m01.cwiseProduct(cos_t.cwiseQuotient(sin_t.cwiseAbs2()));
    Eigen::VectorXd a2 = c.m00;
    Eigen::VectorXd aphi2 = c.m11.cwiseQuotient(sin_t.cwiseAbs2());
    Eigen::VectorXd a1phi = 2.0 * c.m01.cwiseQuotient(sin_t);
    j = a1.asDiagonal() * fd.d1;
    j += Eigen::SparseMatrix<double>(aphi.asDiagonal() * fd.dphi);
    j += Eigen::SparseMatrix<double>(a2.asDiagonal() * fd.d2);
    j += Eigen::SparseMatrix<double>(aphi2.asDiagonal() * fd.dphi2);
    j += Eigen::SparseMatrix<double>(a1phi.asDiagonal() * fd.d1phi);
  }
  Eigen::SparseMatrix<double> diag(sz, sz);
  diag.setIdentity();
  for (int i = 0; i < sz; ++i) diag.coeffRef(i, i) = c.c0[i];
  j += diag;
  return j;
}

bool cone_ok(const SphericalGrid& grid, const Eigen::VectorXd& u, int cone, double margin) {
  if (u.minCoeff() <= 0.0) return false;
  const SymField w = curvature_matrix(grid, u);
  for (int i = 0; i < grid.size(); ++i) {
    const auto sig = symfun::sigma_all(w.dense(i));
    for (int j = 1; j <= cone; ++j)
      if (!(sig[j] > std::pow(margin, j))) return false;
  }
  return true;
}

Eigen::VectorXd symmetrize(const SphericalGrid& grid, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (int i = 0; i < u.size(); ++i) out[i] = 0.5 * (u[i] + u[grid.antipode(i)]);
  return out;
}

}  // namespace

Eigen::VectorXd residual(const std::shared_ptr<const SphericalGrid>& grid,
                         const Eigen::VectorXd& u, const ProblemSpec& spec) {
  const NodeData nd = node_data(*grid, u);
  Eigen::VectorXd res;
  family_terms(spec, *grid, u, nd, &res, nullptr);
  return res;
}

Eigen::VectorXd residual(const SupportBody& body, const ProblemSpec& spec) {
  return residual(body.grid, body.u, spec);
}

Eigen::VectorXd apply_linearization(const std::shared_ptr<const SphericalGrid>& grid,
                                    const Eigen::VectorXd& u, const ProblemSpec& spec,
                                    const Eigen::VectorXd& du) {
  const NodeData nd = node_data(*grid, u);
  LinCoef lin;
  family_terms(spec, *grid, u, nd, nullptr, &lin);

  const Eigen::MatrixXd gdu = grid->gradient(du);
  const SymField hdu = grid->hessian(du);
  Eigen::VectorXd out(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    double v = lin.c0[i] * du[i];
    for (int d = 0; d < grid->dim(); ++d) v += lin.cg(i, d) * gdu(i, d);
    v += contract(lin, hdu, i, grid->dim());
    out[i] = v;
  }
  return out;
}

SolveReport newton_solve(const std::shared_ptr<const SphericalGrid>& grid,
                         const Eigen::VectorXd& init, const ProblemSpec& spec,
                         const SolveOptions& opts) {
  if (init.size() != grid->size()) throw std::invalid_argument("newton_solve: size mismatch");
  if (init.minCoeff() <= 0.0)
    throw NonPositiveError("newton_solve: initial support function must be positive");
  const int cone = spec.cone_order();
  const double margin = 1e-8 * init.mean();
  if (!cone_ok(*grid, init, cone, margin))
    throw NonConvexError("newton_solve: initial iterate outside the Gamma_" +
                         std::to_string(cone) + " cone");

  SolveReport rep;
  rep.grid = grid;
  Eigen::VectorXd u = opts.origin_symmetric ? symmetrize(*grid, init) : init;

  Eigen::VectorXd res;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    NodeData nd = node_data(*grid, u);
    LinCoef lin;
    family_terms(spec, *grid, u, nd, &res, &lin);
    const double fnorm = res.lpNorm<Eigen::Infinity>();
    rep.iterations = iter;
    rep.residual_norm = fnorm;
    if (fnorm <= opts.tol) {
      rep.converged = true;
      break;
    }
    if (iter == opts.max_iter) {
      rep.failure = "max_iter";
      break;
    }

    const Eigen::SparseMatrix<double> j = assemble_jacobian(*grid, lin);
    const double dscale = lin.c0.cwiseAbs().mean() + 1.0;

    // On the p = q line the residual is scale-invariant, so J u = 0 exactly.
    // Solve the gauge-fixed bordered system instead: a scalar multiplier on
    // the equation plus the constraint that the quadrature mean of du stays
    // zero (the normalization "c solved alongside u with fixed integral").
    const bool gauge = (spec.family == Family::LpDual || spec.family == Family::LpDualCM) &&
                       spec.p == spec.q;

    bool accepted = false;
    for (double mu : {0.0, 1e-8, 1e-5, 1e-2}) {
      const int sz = grid->size();
      const int dim_sys = gauge ? sz + 1 : sz;
      Eigen::SparseMatrix<double> jmu(dim_sys, dim_sys);
      {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(size_t(j.nonZeros()) + 2 * size_t(sz) + 1);
        for (int c = 0; c < j.outerSize(); ++c)
          for (Eigen::SparseMatrix<double>::InnerIterator it(j, c); it; ++it)
            trip.emplace_back(int(it.row()), int(it.col()), it.value());
        if (mu > 0.0)
          for (int i = 0; i < sz; ++i) trip.emplace_back(i, i, mu * dscale);
        if (gauge) {
          for (int i = 0; i < sz; ++i) {
            trip.emplace_back(i, sz, 1.0);                      // d(log c)
            trip.emplace_back(sz, i, grid->weights()[i]);       // mean constraint
          }
        }
        jmu.setFromTriplets(trip.begin(), trip.end());
      }
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jmu);
      if (lu.info() != Eigen::Success) continue;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim_sys);
      rhs.head(grid->size()) = -res;
      const Eigen::VectorXd full = lu.solve(rhs);
      const Eigen::VectorXd step = full.head(grid->size());
      if (!step.allFinite()) continue;

      for (double s = 1.0; s >= opts.min_damping; s *= 0.5) {
        Eigen::VectorXd trial = u + s * step;
        if (opts.origin_symmetric) trial = symmetrize(*grid, trial);
        if (trial.minCoeff() <= 0.0) continue;
        if (!cone_ok(*grid, trial, cone, margin)) continue;  // convexity clamp
        try {
          const Eigen::VectorXd rt = residual(grid, trial, spec);
          if (rt.lpNorm<Eigen::Infinity>() < fnorm * (1.0 - 1e-4 * s)) {
            u = trial;
            accepted = true;
            break;
          }
        } catch (const std::domain_error&) {
          continue;
        }
      }
      if (accepted) break;
    }
    if (!accepted) {
      rep.failure = cone_ok(*grid, u, cone, margin) ? "line_search" : "left_cone";
      break;
    }
  }

  rep.u = u;
  rep.round = roundness(*grid, u);
  try {
    rep.body = from_support(grid, u);
  } catch (const std::exception&) {
    rep.body.reset();  // admissible (Gamma_k) but not strictly convex
  }
  return rep;
}

SolveReport newton_solve(const SupportBody& init, const ProblemSpec& spec,
                         const SolveOptions& opts) {
  return newton_solve(init.grid, init.u, spec, opts);
}

double recheck_on_refined(const SolveReport& report, const ProblemSpec& spec) {
  auto fine = report.grid->refined();
  const Eigen::VectorXd uf = report.grid->interpolate(report.u, *fine);
  ProblemSpec fine_spec = spec;
  if (spec.f.size() != 0) fine_spec.f = report.grid->interpolate(spec.f, *fine);
  return residual(fine, uf, fine_spec).lpNorm<Eigen::Infinity>();
}

FlowReport flow_run(const SupportBody& init, const ProblemSpec& spec, const FlowOptions& opts) {
  const auto grid = init.grid;
  const int cone = spec.cone_order();
  const double margin = 1e-8 * init.u.mean();

  Eigen::VectorXd v = init.u.array().log();
  FlowReport rep;
  Eigen::VectorXd res;
  for (int step = 0; step < opts.steps; ++step) {
    const Eigen::VectorXd u = v.array().exp();
    if (!cone_ok(*grid, u, cone, margin))
      throw FlowInstabilityError("flow_run: iterate left the admissible cone");
    res = residual(grid, u, spec);
    Eigen::VectorXd dv = opts.dt * res.array().exp();
    if (dv.lpNorm<Eigen::Infinity>() > 0.5)
      throw FlowInstabilityError("flow_run: step monitor tripped (dt too large)");
    Eigen::VectorXd v_new = v + dv;
    if (opts.normalize) {
      // divide u by its dV-weighted mean radius
      const Eigen::VectorXd u_new = v_new.array().exp();
      const NodeData nd = node_data(*grid, u_new);
      Eigen::VectorXd dens(grid->size());
      for (int i = 0; i < grid->size(); ++i)
        dens[i] = u_new[i] * symfun::sigma_all(nd.w.dense(i))[cone];
      const double rbar = grid->quadrature(dens.cwiseProduct(nd.r)) / grid->quadrature(dens);
      v_new.array() -= std::log(rbar);
    }
    rep.fixed_point_distance = (v_new - v).lpNorm<Eigen::Infinity>();
    v = v_new;
    rep.steps_taken = step + 1;
    if (rep.fixed_point_distance <= opts.tol) break;
  }
  rep.u = v.array().exp();
  rep.residual_norm = res.lpNorm<Eigen::Infinity>();
  rep.gauge_residual_norm =
      (res.array() - grid->quadrature(res) / grid->area()).abs().maxCoeff();
  rep.round = roundness(*grid, rep.u);
  return rep;
}

std::vector<SweepRecord> sweep(const std::shared_ptr<const SphericalGrid>& grid,
                               const ProblemSpec& spec_template,
                               const std::vector<std::pair<double, double>>& pq_points,
                               const SweepOptions& opts) {
  // rows = maximal runs of equal p (continuation order)
  std::vector<std::pair<size_t, size_t>> rows;
  size_t start = 0;
  for (size_t i = 1; i <= pq_points.size(); ++i) {
    if (i == pq_points.size() || pq_points[i].first != pq_points[start].first) {
      rows.emplace_back(start, i);
      start = i;
    }
  }

  std::vector<SweepRecord> records(pq_points.size());
  std::atomic<size_t> next_row{0};

  auto run_row = [&](size_t row_idx) {
    const auto [lo, hi] = rows[row_idx];
    Eigen::VectorXd warm;
    for (size_t pt = lo; pt < hi; ++pt) {
      SweepRecord rec;
      rec.p = pq_points[pt].first;
      rec.q = pq_points[pt].second;
      ProblemSpec spec = spec_template;
      spec.p = rec.p;
      spec.q = rec.q;
      for (int j = 0; j < opts.inits_per_point; ++j) {
        Eigen::VectorXd u0;
        std::string label;
        if (j == 0 && opts.warm_start && warm.size() != 0) {
          u0 = warm;
          label = "warm_start";
        } else {
          const unsigned seed = opts.seed + unsigned(1000 * pt) + unsigned(j);
          auto shape = ShapeSpec::random_perturbed(spec.n, 1.0, opts.max_mode, opts.amplitude,
                                                   seed, opts.origin_symmetric);
          u0 = make_shape(shape, grid).u;
          label = "seed " + std::to_string(seed);
        }
        ++rec.attempted;
        SolveOptions so = opts.solve;
        so.origin_symmetric = opts.origin_symmetric;
        try {
          SolveReport r = newton_solve(grid, u0, spec, so);
          r.init_label = label;
          if (r.converged) {
            ++rec.converged;
            rec.max_roundness = std::max(rec.max_roundness, r.round.deviation);
            rec.max_center = std::max(rec.max_center, r.round.center.norm());
            rec.max_residual = std::max(rec.max_residual, r.residual_norm);
            if (warm.size() == 0) warm = r.u;
          }
          rec.reports.push_back(std::move(r));
        } catch (const std::exception&) {
          // invalid initialization; counted as attempted, not converged
        }
      }
      // distinct solutions among converged, compared scale-free
      std::vector<Eigen::VectorXd> clusters;
      for (const auto& r : rec.reports) {
        if (!r.converged) continue;
        Eigen::VectorXd s = r.u / r.u.mean();
        bool found = false;
        for (const auto& c : clusters)
          if ((c - s).lpNorm<Eigen::Infinity>() < 1e-4) {
            found = true;
            break;
          }
        if (!found) clusters.push_back(std::move(s));
      }
      rec.distinct = int(clusters.size());
      records[pt] = std::move(rec);
    }
  };

  const int workers = std::max(1, opts.threads);
  if (workers == 1) {
    for (size_t rI = 0; rI < rows.size(); ++rI) run_row(rI);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (size_t rI = next_row.fetch_add(1); rI < rows.size(); rI = next_row.fetch_add(1))
          run_row(rI);
      });
    for (auto& t : pool) t.join();
  }
  return records;
}

}  // namespace minklab::solver
