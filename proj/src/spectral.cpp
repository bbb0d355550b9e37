#include "minklab/spectral.hpp"

#include <cmath>

#include "minklab/symfun.hpp"

namespace minklab::spectral {

namespace {

// cofactor matrix of W (= det(W) W^{-1} for invertible W)
Eigen::MatrixXd cofactor(const Eigen::MatrixXd& w) {
  if (w.rows() == 1) return Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd c(2, 2);
  c << w(1, 1), -w(0, 1), -w(1, 0), w(0, 0);
  return c;
}

}  // namespace

Eigen::VectorXd SpectralProblem::dv_density() const {
  const int nn = body.dim();
  Eigen::VectorXd d(body.size());
  for (int i = 0; i < body.size(); ++i)
    d[i] = body.u[i] * symfun::binom(nn, k) * symfun::p_k(body.W.dense(i), k);
  return d;
}

double SpectralProblem::total_measure() const {
  return body.grid->quadrature(dv_density());
}

SpectralProblem make_problem(SupportBody body, int k) {
  const int n = body.dim();
  if (k < 1 || k > n) throw std::invalid_argument("make_problem: need 1 <= k <= n");
  SpectralProblem p{std::move(body), k};
  if (p.total_measure() <= 0.0) throw std::invalid_argument("make_problem: measure-zero body");
  return p;
}

GapResult bm_gap(const SpectralProblem& problem, const Eigen::VectorXd& f_in) {
  if (problem.k != problem.n()) throw std::invalid_argument("bm_gap: defined for k = n");
  const auto& body = problem.body;
  const auto& grid = *body.grid;
  if (f_in.size() != grid.size()) throw std::invalid_argument("bm_gap: field size mismatch");

  const Eigen::VectorXd dv = problem.dv_density();
  const double total = grid.quadrature(dv);

  GapResult out;
  Eigen::VectorXd f = f_in;
  const double mean = grid.quadrature(dv.cwiseProduct(f)) / total;
  if (std::abs(mean) > 1e-10 * std::max(1.0, f.lpNorm<Eigen::Infinity>())) {
    f.array() -= mean;
    out.projected = true;
  }

  const Eigen::MatrixXd grad = grid.gradient(f);
  Eigen::VectorXd dirichlet(grid.size()), mass(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd g = grad.row(i).transpose();
    dirichlet[i] = body.u[i] * body.u[i] * g.dot(cofactor(body.W.dense(i)) * g);
    mass[i] = double(problem.n()) * f[i] * f[i] * dv[i];
  }
  const double a = grid.quadrature(dirichlet);
  const double b = grid.quadrature(mass);
  out.gap = a - b;
  out.scale = std::abs(a) + std::abs(b);
  return out;
}

std::vector<double> bm_eigenvalues(const SpectralProblem& problem, int count) {
  if (problem.k != problem.n()) throw std::invalid_argument("bm_eigenvalues: defined for k = n");
  const auto& body = problem.body;
  const auto& grid = *body.grid;
  const int sz = grid.size();
  const int dim = grid.dim();

  // Assemble the strong form L f = div(C grad f), C = u^2 cof(W), and take
  // A = -diag(w) L symmetrized.  Building the Dirichlet form from squared
  // first-derivative matrices would let grid-alternating modes through (the
  // centered first derivative annihilates them); the second-derivative
  // stencils inside L keep those modes stiff.
  Eigen::VectorXd c11(sz), c12(sz), c22(sz), sin_t(sz), cos_t(sz);
  for (int i = 0; i < sz; ++i) {
    const Eigen::MatrixXd cof = cofactor(body.W.dense(i));
    const double u2 = body.u[i] * body.u[i];
    c11[i] = u2 * cof(0, 0);
    if (dim == 2) {
      c12[i] = u2 * cof(0, 1);
      c22[i] = u2 * cof(1, 1);
      cos_t[i] = grid.nodes()(i, 2);
      sin_t[i] = std::sqrt(std::max(0.0, 1.0 - cos_t[i] * cos_t[i]));
    }
  }

  // coefficient derivatives (raw coordinate partials from the frame pieces)
  Eigen::VectorXd a1(sz), a2(sz);
  if (dim == 1) {
    a1 = grid.gradient(c11).col(0);
  } else {
    const Eigen::MatrixXd gc11 = grid.gradient(c11);
    const Eigen::MatrixXd gc12 = grid.gradient(c12);
    const Eigen::MatrixXd gc22 = grid.gradient(c22);
    for (int i = 0; i < sz; ++i) {
      const double s = sin_t[i], ct = cos_t[i];
      const double dth_c11 = gc11(i, 0);
      const double dth_c12 = gc12(i, 0);
      const double dph_c12 = s * gc12(i, 1);
      const double dph_c22 = s * gc22(i, 1);
      a1[i] = dth_c11 + ct / s * c11[i] + dph_c12 / s;
      a2[i] = dth_c12 / s + dph_c22 / (s * s);
    }
  }

  auto apply_l = [&](const Eigen::VectorXd& f) {
    const Eigen::MatrixXd gf = grid.gradient(f);
    const SymField hf = grid.hessian(f);
    Eigen::VectorXd out(sz);
    if (dim == 1) {
      for (int i = 0; i < sz; ++i) out[i] = c11[i] * hf.comp(i, 0) + a1[i] * gf(i, 0);
      return out;
    }
    for (int i = 0; i < sz; ++i) {
      const double s = sin_t[i], ct = cos_t[i];
      const double fth = gf(i, 0);
      const double fph = s * gf(i, 1);
      const double fthth = hf.comp(i, 0);
      const double fthph = s * hf.comp(i, 1) + ct * gf(i, 1);
      const double fphph = s * s * hf.comp(i, 2) - s * ct * fth;
      out[i] = c11[i] * fthth + 2.0 * c12[i] / s * fthph + c22[i] / (s * s) * fphph +
               a1[i] * fth + a2[i] * fph;
    }
    return out;
  };

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(sz, sz);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(sz);
  for (int j = 0; j < sz; ++j) {
    e[j] = 1.0;
    a.col(j) = -grid.weights().cwiseProduct(apply_l(e));
    e[j] = 0.0;
  }
  a = 0.5 * (a + a.transpose());

  const Eigen::VectorXd dv = problem.dv_density();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(sz, sz);
  for (int i = 0; i < sz; ++i) b(i, i) = double(problem.n()) * grid.weights()[i] * dv[i];

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("bm_eigenvalues: factorization failure");

  // Near-zero eigenvalues are deflated: the constant field (the mean-zero
  // constraint) and the Nyquist artifact of odd-order spectral
  // differentiation both sit in the kernel of the discrete Dirichlet form.
  // The genuine spectrum starts at 1, so the cut is unambiguous.
  std::vector<double> vals;
  for (int i = 0; i < sz && int(vals.size()) < count; ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev < 1e-6) continue;
    vals.push_back(ev);
  }
  return vals;
}

std::vector<Eigen::VectorXd> paper_test_functions(const SpectralProblem& problem, double alpha) {
  const auto& body = problem.body;
  const auto& grid = *body.grid;
  const int amb = grid.dim() + 1;
  const Eigen::VectorXd dv = problem.dv_density();
  const double total = grid.quadrature(dv);

  std::vector<Eigen::VectorXd> fields;
  for (int l = 0; l < amb; ++l) {
    Eigen::VectorXd f(grid.size());
    for (int i = 0; i < grid.size(); ++i)
      f[i] = std::pow(body.r[i], alpha) * body.X(i, l);
    f.array() -= grid.quadrature(dv.cwiseProduct(f)) / total;
    fields.push_back(std::move(f));
  }
  return fields;
}

GapResult moment_gap(const SpectralProblem& problem, double alpha) {
  const auto& body = problem.body;
  const auto& grid = *body.grid;
  const int n = problem.n();
  const int k = problem.k;
  if (k < n && alpha < 0.0)
    throw std::domain_error("moment_gap: k < n requires alpha >= 0");

  const Eigen::VectorXd dv = problem.dv_density();
  const double total = grid.quadrature(dv);
  const int amb = grid.dim() + 1;

  Eigen::VectorXd lhs(grid.size()), t2(grid.size()), t3(grid.size());
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(amb);
  for (int i = 0; i < grid.size(); ++i) {
    const double r = body.r[i];
    const double ra = std::pow(r, alpha);
    moment += grid.weights()[i] * dv[i] * ra * body.X.row(i).transpose();

    const Eigen::MatrixXd w = body.W.dense(i);
    const Eigen::VectorXd gu = body.grad.row(i).transpose();
    const double quad = alpha * alpha + 2.0 * alpha;
    lhs[i] = double(k) * std::pow(r, 2.0 * alpha + 2.0) * dv[i];
    if (k == n) {
      // <grad u, grad|X|> = (grad u)^T W (grad u) / r
      t2[i] = std::pow(r, 2.0 * alpha) * body.u[i] * w.trace() * dv[i];
      t3[i] = quad * std::pow(r, 2.0 * alpha - 1.0) * body.u[i] * (gu.dot(w * gu) / r) * dv[i];
    } else {
      const auto s = symfun::sigma_all(w);
      const double curv = s[1] - double(k + 1) * s[k + 1] / s[k];
      t2[i] = std::pow(r, 2.0 * alpha) * body.u[i] * curv * dv[i];
      t3[i] = quad * std::pow(r, 2.0 * alpha - 2.0) * gu.squaredNorm() * body.u[i] * curv * dv[i];
    }
  }

  const double v_lhs = grid.quadrature(lhs);
  const double v_t1 = double(k) * moment.squaredNorm() / total;
  const double v_t2 = grid.quadrature(t2);
  const double v_t3 = grid.quadrature(t3);

  GapResult out;
  out.gap = v_t1 + v_t2 + v_t3 - v_lhs;
  out.scale = std::abs(v_t1) + std::abs(v_t2) + std::abs(v_t3) + std::abs(v_lhs);
  return out;
}

GapResult moment_gap_via_test_functions(const SpectralProblem& problem, double alpha) {
  if (problem.k != problem.n())
    throw std::invalid_argument("moment_gap_via_test_functions: defined for k = n");
  GapResult out;
  for (const auto& f : paper_test_functions(problem, alpha)) {
    const GapResult g = bm_gap(problem, f);
    out.gap += g.gap;
    out.scale += g.scale;
  }
  return out;
}

}  // namespace minklab::spectral
