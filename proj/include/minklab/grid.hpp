#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <string>
#include <vector>

// Discretizations of S^1 and S^2 carrying quadrature weights and the
// differential operators needed to form W = Hess(u) + u g0 in an orthonormal
// tangent frame.
//
// S^1: N uniform angles, trapezoid weights, FFT spectral differentiation.
// S^2: Gauss-Legendre latitudes x uniform longitudes.  Longitude derivatives
//      are spectral (FFT per ring); latitude derivatives use 7-point
//      (6th-order) stencils on the slightly nonuniform theta nodes with
//      cross-pole continuation u(-theta, phi) = u(theta, phi + pi).  The
//      poles themselves are never nodes.
//
// Grids are immutable after construction and safe to share across threads.

namespace minklab {

// Packed symmetric-matrix field in the grid's orthonormal tangent frame.
// dim=1: one component [h]; dim=2: three components [h_tt, h_tp, h_pp].
struct SymField {
  int dim = 0;
  Eigen::MatrixXd comp;  // size x 1 or size x 3

  Eigen::Matrix2d mat2(int node) const {
    Eigen::Matrix2d m;
    m << comp(node, 0), comp(node, 1), comp(node, 1), comp(node, 2);
    return m;
  }
  double det(int node) const {
    return dim == 1 ? comp(node, 0)
                    : comp(node, 0) * comp(node, 2) - comp(node, 1) * comp(node, 1);
  }
  double trace(int node) const {
    return dim == 1 ? comp(node, 0) : comp(node, 0) + comp(node, 2);
  }
  Eigen::MatrixXd dense(int node) const {
    if (dim == 1) {
      Eigen::MatrixXd m(1, 1);
      m(0, 0) = comp(node, 0);
      return m;
    }
    return mat2(node);
  }
};

// All-finite-difference realizations of the derivative operators; used to
// assemble sparse Jacobians and preconditioners.  On S^2 the latitude matrix
// coincides with the production operator; the longitude matrices are the
// 6th-order periodic approximations of the spectral ones.
struct FdOps {
  Eigen::SparseMatrix<double> d1;        // theta (S^2) or angle (S^1)
  Eigen::SparseMatrix<double> d2;        // second derivative, same direction
  Eigen::SparseMatrix<double> dphi;      // S^2 only
  Eigen::SparseMatrix<double> dphi2;     // S^2 only
  Eigen::SparseMatrix<double> d1phi;     // S^2 only, mixed
};

class SphericalGrid {
 public:
  virtual ~SphericalGrid() = default;

  // n=1: resolution = node count (even).  n=2: resolution = latitude count,
  // longitudes = 2 * resolution (even).
  static std::shared_ptr<const SphericalGrid> make(int dim, int resolution);
  static std::shared_ptr<const SphericalGrid> make_circle(int n_nodes);
  static std::shared_ptr<const SphericalGrid> make_sphere(int n_lat, int n_lon);

  int dim() const { return dim_; }
  int size() const { return int(weights_.size()); }
  virtual std::string resolution() const = 0;

  const Eigen::MatrixXd& nodes() const { return nodes_; }      // size x (dim+1)
  const Eigen::VectorXd& weights() const { return weights_; }
  double area() const { return weights_.sum(); }

  double quadrature(const Eigen::VectorXd& f) const { return weights_.dot(f); }

  // ambient components of the i-th tangent frame vector (i in [0, dim))
  const Eigen::MatrixXd& frame(int i) const { return frames_[i]; }

  // covariant operators in the orthonormal frame; all linear in u
  virtual Eigen::MatrixXd gradient(const Eigen::VectorXd& u) const = 0;  // size x dim
  virtual SymField hessian(const Eigen::VectorXd& u) const = 0;
  virtual Eigen::VectorXd laplacian(const Eigen::VectorXd& u) const = 0;

  virtual int antipode(int node) const = 0;

  virtual std::shared_ptr<const SphericalGrid> refined() const = 0;
  virtual Eigen::VectorXd interpolate(const Eigen::VectorXd& u,
                                      const SphericalGrid& target) const = 0;

  virtual const FdOps& fd_ops() const = 0;

 protected:
  int dim_ = 0;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
  std::vector<Eigen::MatrixXd> frames_;
};

// W = Hess(u) + u g0 given precomputed pieces.
SymField curvature_matrix(const SphericalGrid& grid, const Eigen::VectorXd& u);

}  // namespace minklab
