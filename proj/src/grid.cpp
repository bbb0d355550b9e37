#include "minklab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace minklab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// FFT-based differentiation of the trigonometric interpolant on a uniform
// periodic grid of even size m (period 2*pi).
class SpectralDiff {
 public:
  explicit SpectralDiff(int m) : m_(m) {
    if (m < 4 || m % 2 != 0) throw std::invalid_argument("spectral grid size must be even, >= 4");
    std::vector<double> r(m);
    std::vector<std::complex<double>> c(m / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(m, r.data(), reinterpret_cast<fftw_complex*>(c.data()),
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(c.data()), r.data(),
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~SpectralDiff() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  SpectralDiff(const SpectralDiff&) = delete;
  SpectralDiff& operator=(const SpectralDiff&) = delete;

  int size() const { return m_; }

  std::vector<std::complex<double>> spectrum(const double* in) const {
    std::vector<double> buf(in, in + m_);
    std::vector<std::complex<double>> spec(m_ / 2 + 1);
    fftw_execute_dft_r2c(fwd_, buf.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    return spec;
  }

  void derivative(const double* in, double* out, int order) const {
    auto spec = spectrum(in);
    const int ny = m_ / 2;
    for (int k = 0; k < ny; ++k) {
      std::complex<double> f(1.0, 0.0);
      for (int o = 0; o < order; ++o) f *= std::complex<double>(0.0, double(k));
      spec[k] *= f;
    }
    if (order % 2 == 1) {
      spec[ny] = 0.0;  // odd derivatives annihilate the Nyquist mode
    } else {
      double f = 1.0;
      for (int o = 0; o < order; o += 2) f *= -double(ny) * double(ny);
      spec[ny] *= f;
    }
    std::vector<double> buf(m_);
    fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(spec.data()), buf.data());
    for (int j = 0; j < m_; ++j) out[j] = buf[j] / double(m_);
  }

  // evaluate the trigonometric interpolant at arbitrary angles
  Eigen::VectorXd evaluate(const double* in, const Eigen::VectorXd& angles) const {
    auto spec = spectrum(in);
    const int ny = m_ / 2;
    Eigen::VectorXd out(angles.size());
    for (int a = 0; a < angles.size(); ++a) {
      const double x = angles[a];
      double acc = spec[0].real();
      for (int k = 1; k < ny; ++k)
        acc += 2.0 * (spec[k].real() * std::cos(k * x) - spec[k].imag() * std::sin(k * x));
      acc += spec[ny].real() * std::cos(ny * x);
      out[a] = acc / double(m_);
    }
    return out;
  }

 private:
  int m_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

// Fornberg's algorithm: weights of d^o/dx^o at x0, o = 0..maxorder, on the
// given nodes.  Returns (nodes.size() x maxorder+1).
Eigen::MatrixXd fornberg_weights(double x0, const Eigen::VectorXd& x, int maxorder) {
  const int n = int(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, maxorder + 1);
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, maxorder);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

void gauss_legendre(int n, Eigen::VectorXd& mu, Eigen::VectorXd& w) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double b = double(j) / std::sqrt(4.0 * j * j - 1.0);
    jac(j - 1, j) = b;
    jac(j, j - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  mu = es.eigenvalues();
  w = 2.0 * es.eigenvectors().row(0).array().square();
}

// centered 6th-order periodic stencils
constexpr double kD1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kD2[7] = {1.0 / 90,  -3.0 / 20, 3.0 / 2,
                           -49.0 / 18, 3.0 / 2,  -3.0 / 20, 1.0 / 90};

Eigen::SparseMatrix<double> periodic_fd(int m, double h, const double* stencil, double hpow) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(m) * 7);
  for (int i = 0; i < m; ++i)
    for (int s = -3; s <= 3; ++s) {
      const double w = stencil[s + 3] / hpow;
      if (w == 0.0) continue;
      trip.emplace_back(i, ((i + s) % m + m) % m, w);
    }
  Eigen::SparseMatrix<double> d(m, m);
  d.setFromTriplets(trip.begin(), trip.end());
  (void)h;
  return d;
}

// ------------------------------ S^1 ------------------------------

class CircleGrid final : public SphericalGrid {
 public:
  explicit CircleGrid(int n) : n_(n), fft_(n) {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("circle grid: need even size >= 8");
    dim_ = 1;
    nodes_.resize(n, 2);
    weights_ = Eigen::VectorXd::Constant(n, 2.0 * kPi / n);
    Eigen::MatrixXd tang(n, 2);
    theta_.resize(n);
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      theta_[i] = t;
      nodes_(i, 0) = std::cos(t);
      nodes_(i, 1) = std::sin(t);
      tang(i, 0) = -std::sin(t);
      tang(i, 1) = std::cos(t);
    }
    frames_.push_back(std::move(tang));
  }

  std::string resolution() const override { return "N=" + std::to_string(n_); }

  Eigen::MatrixXd gradient(const Eigen::VectorXd& u) const override {
    check(u);
    Eigen::MatrixXd g(n_, 1);
    fft_.derivative(u.data(), g.col(0).data(), 1);
    return g;
  }

  SymField hessian(const Eigen::VectorXd& u) const override {
    check(u);
    SymField h;
    h.dim = 1;
    h.comp.resize(n_, 1);
    fft_.derivative(u.data(), h.comp.col(0).data(), 2);
    return h;
  }

  Eigen::VectorXd laplacian(const Eigen::VectorXd& u) const override {
    return hessian(u).comp.col(0);
  }

  int antipode(int node) const override { return (node + n_ / 2) % n_; }

  std::shared_ptr<const SphericalGrid> refined() const override { return make_circle(2 * n_); }

  Eigen::VectorXd interpolate(const Eigen::VectorXd& u, const SphericalGrid& target) const override {
    check(u);
    const auto* c = dynamic_cast<const CircleGrid*>(&target);
    if (!c) throw std::invalid_argument("interpolate: target must be a circle grid");
    return fft_.evaluate(u.data(), c->theta_);
  }

  const FdOps& fd_ops() const override {
    std::call_once(fd_once_, [this] {
      const double h = 2.0 * kPi / n_;
      fd_.d1 = periodic_fd(n_, h, kD1, h);
      fd_.d2 = periodic_fd(n_, h, kD2, h * h);
    });
    return fd_;
  }

 private:
  void check(const Eigen::VectorXd& u) const {
    if (u.size() != n_) throw std::invalid_argument("field size does not match grid");
  }

  int n_;
  Eigen::VectorXd theta_;
  SpectralDiff fft_;
  mutable std::once_flag fd_once_;
  mutable FdOps fd_;
};

// ------------------------------ S^2 ------------------------------

class SphereGrid final : public SphericalGrid {
 public:
  SphereGrid(int n_lat, int n_lon) : L_(n_lat), M_(n_lon), fft_(n_lon) {
    if (n_lat < 8) throw std::invalid_argument("sphere grid: need >= 8 latitudes");
    if (n_lon < 8 || n_lon % 2 != 0)
      throw std::invalid_argument("sphere grid: need even longitude count >= 8");
    dim_ = 2;

    Eigen::VectorXd mu, wmu;
    gauss_legendre(L_, mu, wmu);
    // theta ascending: mu descending
    theta_.resize(L_);
    mu_.resize(L_);
    wlat_.resize(L_);
    for (int i = 0; i < L_; ++i) {
      mu_[i] = mu[L_ - 1 - i];
      wlat_[i] = wmu[L_ - 1 - i];
      theta_[i] = std::acos(mu_[i]);
    }
    sin_t_ = theta_.array().sin();
    cos_t_ = theta_.array().cos();

    const int sz = L_ * M_;
    nodes_.resize(sz, 3);
    weights_.resize(sz);
    Eigen::MatrixXd etheta(sz, 3), ephi(sz, 3);
    for (int i = 0; i < L_; ++i)
      for (int j = 0; j < M_; ++j) {
        const int id = i * M_ + j;
        const double phi = 2.0 * kPi * j / M_;
        const double st = sin_t_[i], ct = cos_t_[i];
        const double cp = std::cos(phi), sp = std::sin(phi);
        nodes_(id, 0) = st * cp;
        nodes_(id, 1) = st * sp;
        nodes_(id, 2) = ct;
        etheta(id, 0) = ct * cp;
        etheta(id, 1) = ct * sp;
        etheta(id, 2) = -st;
        ephi(id, 0) = -sp;
        ephi(id, 1) = cp;
        ephi(id, 2) = 0.0;
        weights_[id] = wlat_[i] * (2.0 * kPi / M_);
      }
    frames_.push_back(std::move(etheta));
    frames_.push_back(std::move(ephi));

    build_theta_stencils();
  }

  std::string resolution() const override {
    return std::to_string(L_) + "x" + std::to_string(M_);
  }

  Eigen::MatrixXd gradient(const Eigen::VectorXd& u) const override {
    check(u);
    Eigen::MatrixXd g(size(), 2);
    Eigen::VectorXd ut = apply_theta(u, 1);
    Eigen::VectorXd up = apply_phi(u, 1);
    for (int i = 0; i < L_; ++i)
      for (int j = 0; j < M_; ++j) {
        const int id = i * M_ + j;
        g(id, 0) = ut[id];
        g(id, 1) = up[id] / sin_t_[i];
      }
    return g;
  }

  SymField hessian(const Eigen::VectorXd& u) const override {
    check(u);
    SymField h;
    h.dim = 2;
    h.comp.resize(size(), 3);
    Eigen::VectorXd ut = apply_theta(u, 1);
    Eigen::VectorXd up = apply_phi(u, 1);
    Eigen::VectorXd utt = apply_theta(u, 2);
    Eigen::VectorXd upp = apply_phi(u, 2);
    Eigen::VectorXd utp = apply_theta(up, 1);
    for (int i = 0; i < L_; ++i) {
      const double st = sin_t_[i], ct = cos_t_[i];
      for (int j = 0; j < M_; ++j) {
        const int id = i * M_ + j;
        h.comp(id, 0) = utt[id];
        h.comp(id, 1) = (utp[id] - ct / st * up[id]) / st;
        h.comp(id, 2) = upp[id] / (st * st) + ct / st * ut[id];
      }
    }
    return h;
  }

  Eigen::VectorXd laplacian(const Eigen::VectorXd& u) const override {
    check(u);
    Eigen::VectorXd ut = apply_theta(u, 1);
    Eigen::VectorXd utt = apply_theta(u, 2);
    Eigen::VectorXd upp = apply_phi(u, 2);
    Eigen::VectorXd out(size());
    for (int i = 0; i < L_; ++i) {
      const double st = sin_t_[i], ct = cos_t_[i];
      for (int j = 0; j < M_; ++j) {
        const int id = i * M_ + j;
        out[id] = utt[id] + ct / st * ut[id] + upp[id] / (st * st);
      }
    }
    return out;
  }

  int antipode(int node) const override {
    const int i = node / M_, j = node % M_;
    return (L_ - 1 - i) * M_ + (j + M_ / 2) % M_;
  }

  std::shared_ptr<const SphericalGrid> refined() const override {
    return make_sphere(2 * L_, 2 * M_);
  }

  Eigen::VectorXd interpolate(const Eigen::VectorXd& u, const SphericalGrid& target) const override {
    check(u);
    const auto* t = dynamic_cast<const SphereGrid*>(&target);
    if (!t) throw std::invalid_argument("interpolate: target must be a sphere grid");

    // longitude first: trig interpolation ring by ring
    Eigen::VectorXd phis(t->M_);
    for (int b = 0; b < t->M_; ++b) phis[b] = 2.0 * kPi * b / t->M_;
    Eigen::MatrixXd mid(L_, t->M_);
    std::vector<double> ring(M_);
    for (int i = 0; i < L_; ++i) {
      for (int j = 0; j < M_; ++j) ring[j] = u[i * M_ + j];
      mid.row(i) = fft_.evaluate(ring.data(), phis).transpose();
    }

    // latitude: local 8-point polynomial interpolation in theta on the
    // cross-pole extended axis (smooth sphere functions are not polynomial
    // in cos(theta) per column, so a global mu-interpolant would lose
    // accuracy at the poles)
    constexpr int kPts = 8;
    Eigen::VectorXd out(t->size());
    for (int a = 0; a < t->L_; ++a) {
      const double th = t->theta_[a];
      int lo = int(std::upper_bound(theta_.data(), theta_.data() + L_, th) - theta_.data());
      int start = std::clamp(lo - kPts / 2, -3, L_ + 3 - kPts);
      Eigen::VectorXd xs(kPts);
      std::array<int, kPts> rings{};
      std::array<bool, kPts> flips{};
      for (int s = 0; s < kPts; ++s) {
        int rg;
        bool fl;
        double tv;
        extend(start + s, L_, theta_, rg, fl, tv);
        rings[s] = rg;
        flips[s] = fl;
        xs[s] = tv;
      }
      Eigen::MatrixXd w = fornberg_weights(th, xs, 0);
      for (int b = 0; b < t->M_; ++b) {
        double acc = 0.0;
        for (int s = 0; s < kPts; ++s) {
          const int col = flips[s] ? (b + t->M_ / 2) % t->M_ : b;
          acc += w(s, 0) * mid(rings[s], col);
        }
        out[a * t->M_ + b] = acc;
      }
    }
    return out;
  }

  const FdOps& fd_ops() const override {
    std::call_once(fd_once_, [this] { build_fd_ops(); });
    return fd_;
  }

 private:
  struct StencilEntry {
    int ring;
    bool flip;  // phi -> phi + pi
    double w1, w2;
  };

  void check(const Eigen::VectorXd& u) const {
    if (u.size() != size()) throw std::invalid_argument("field size does not match grid");
  }

  // extended ring index -> (source ring, flip); theta value of the extension
  static void extend(int e, int L, const Eigen::VectorXd& theta, int& ring, bool& flip,
                     double& th) {
    if (e < 0) {
      ring = -1 - e;
      flip = true;
      th = -theta[ring];
    } else if (e >= L) {
      ring = 2 * L - 1 - e;
      flip = true;
      th = 2.0 * kPi - theta[ring];
    } else {
      ring = e;
      flip = false;
      th = theta[e];
    }
  }

  void build_theta_stencils() {
    stencil_.resize(L_);
    for (int i = 0; i < L_; ++i) {
      Eigen::VectorXd xs(7);
      std::array<StencilEntry, 7> row;
      for (int s = -3; s <= 3; ++s) {
        int ring;
        bool flip;
        double th;
        extend(i + s, L_, theta_, ring, flip, th);
        row[s + 3].ring = ring;
        row[s + 3].flip = flip;
        xs[s + 3] = th;
      }
      Eigen::MatrixXd w = fornberg_weights(theta_[i], xs, 2);
      for (int s = 0; s < 7; ++s) {
        row[s].w1 = w(s, 1);
        row[s].w2 = w(s, 2);
      }
      stencil_[i] = row;
    }
  }

  Eigen::VectorXd apply_theta(const Eigen::VectorXd& u, int order) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
    for (int i = 0; i < L_; ++i)
      for (const auto& e : stencil_[i]) {
        const double w = order == 1 ? e.w1 : e.w2;
        const int base = e.ring * M_;
        const int shift = e.flip ? M_ / 2 : 0;
        for (int j = 0; j < M_; ++j) out[i * M_ + j] += w * u[base + (j + shift) % M_];
      }
    return out;
  }

  Eigen::VectorXd apply_phi(const Eigen::VectorXd& u, int order) const {
    Eigen::VectorXd out(size());
    std::vector<double> ring(M_), der(M_);
    for (int i = 0; i < L_; ++i) {
      for (int j = 0; j < M_; ++j) ring[j] = u[i * M_ + j];
      fft_.derivative(ring.data(), der.data(), order);
      for (int j = 0; j < M_; ++j) out[i * M_ + j] = der[j];
    }
    return out;
  }

  void build_fd_ops() const {
    const int sz = size();
    std::vector<Eigen::Triplet<double>> t1, t2;
    t1.reserve(size_t(sz) * 7);
    t2.reserve(size_t(sz) * 7);
    for (int i = 0; i < L_; ++i)
      for (const auto& e : stencil_[i]) {
        const int shift = e.flip ? M_ / 2 : 0;
        for (int j = 0; j < M_; ++j) {
          const int col = e.ring * M_ + (j + shift) % M_;
          t1.emplace_back(i * M_ + j, col, e.w1);
          t2.emplace_back(i * M_ + j, col, e.w2);
        }
      }
    fd_.d1.resize(sz, sz);
    fd_.d2.resize(sz, sz);
    fd_.d1.setFromTriplets(t1.begin(), t1.end());
    fd_.d2.setFromTriplets(t2.begin(), t2.end());

    const double h = 2.0 * kPi / M_;
    std::vector<Eigen::Triplet<double>> p1, p2;
    p1.reserve(size_t(sz) * 7);
    p2.reserve(size_t(sz) * 7);
    for (int i = 0; i < L_; ++i)
      for (int j = 0; j < M_; ++j)
        for (int s = -3; s <= 3; ++s) {
          const int col = i * M_ + ((j + s) % M_ + M_) % M_;
          if (kD1[s + 3] != 0.0) p1.emplace_back(i * M_ + j, col, kD1[s + 3] / h);
          p2.emplace_back(i * M_ + j, col, kD2[s + 3] / (h * h));
        }
    fd_.dphi.resize(sz, sz);
    fd_.dphi2.resize(sz, sz);
    fd_.dphi.setFromTriplets(p1.begin(), p1.end());
    fd_.dphi2.setFromTriplets(p2.begin(), p2.end());
    fd_.d1phi = fd_.d1 * fd_.dphi;
  }

  int L_, M_;
  Eigen::VectorXd theta_, mu_, wlat_, sin_t_, cos_t_;
  SpectralDiff fft_;
  std::vector<std::array<StencilEntry, 7>> stencil_;
  mutable std::once_flag fd_once_;
  mutable FdOps fd_;

 public:
  const Eigen::VectorXd& sin_theta() const { return sin_t_; }
  const Eigen::VectorXd& cos_theta() const { return cos_t_; }
  int n_lat() const { return L_; }
  int n_lon() const { return M_; }
};

}  // namespace

std::shared_ptr<const SphericalGrid> SphericalGrid::make_circle(int n_nodes) {
  return std::make_shared<CircleGrid>(n_nodes);
}

std::shared_ptr<const SphericalGrid> SphericalGrid::make_sphere(int n_lat, int n_lon) {
  return std::make_shared<SphereGrid>(n_lat, n_lon);
}

std::shared_ptr<const SphericalGrid> SphericalGrid::make(int dim, int resolution) {
  if (dim == 1) return make_circle(resolution);
  if (dim == 2) return make_sphere(resolution, 2 * resolution);
  throw std::invalid_argument("only S^1 and S^2 are supported");
}

SymField curvature_matrix(const SphericalGrid& grid, const Eigen::VectorXd& u) {
  SymField w = grid.hessian(u);
  if (grid.dim() == 1) {
    w.comp.col(0) += u;
  } else {
    w.comp.col(0) += u;
    w.comp.col(2) += u;
  }
  return w;
}

}  // namespace minklab
