#pragma once

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "minklab/grid.hpp"

// Strictly convex bodies represented by their support function on a
// spherical grid, with all derived geometry pulled back through the Gauss
// map: W = Hess(u) + u g0, position X = u z + grad u, radial function
// r = |X|, principal curvature radii = eigenvalues of W, and the area
// density sigma_n(W) = dmu/dsigma.

namespace minklab {

struct NonConvexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPositiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ConvexityCheck { Strict, Skip };

struct SupportBody {
  std::shared_ptr<const SphericalGrid> grid;
  Eigen::VectorXd u;             // support function
  Eigen::MatrixXd grad;          // frame components of grad u, size x dim
  SymField W;                    // Hess(u) + u g0
  Eigen::MatrixXd X;             // ambient position, size x (dim+1)
  Eigen::VectorXd r;             // |X|
  Eigen::MatrixXd radii;         // principal radii per node, ascending
  Eigen::VectorXd area_density;  // sigma_n(W)
  double min_radius = 0.0;       // smallest principal radius over all nodes

  int dim() const { return grid->dim(); }
  int size() const { return grid->size(); }
};

// Builds the derived geometry.  Throws NonPositiveError when u <= 0
// somewhere; with ConvexityCheck::Strict also throws NonConvexError when the
// smallest eigenvalue of W drops below 1e-8 * mean(u).
SupportBody from_support(std::shared_ptr<const SphericalGrid> grid, const Eigen::VectorXd& u,
                         ConvexityCheck check = ConvexityCheck::Strict);

struct ShapeSpec {
  enum class Kind { Sphere, Ellipsoid, PerturbedSphere };

  struct Mode {
    int l = 0;       // S^2 degree / S^1 wave number
    int m = 0;       // S^2 order in [-l, l] / S^1: 0 = cos, 1 = sin
    double eps = 0;  // amplitude relative to the base radius
  };

  Kind kind = Kind::Sphere;
  double radius = 1.0;         // sphere
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // sphere; z-component unused on S^1
  Eigen::VectorXd semi_axes;   // ellipsoid, dim+1 entries
  double base_radius = 1.0;    // perturbed sphere
  std::vector<Mode> modes;

  static ShapeSpec sphere(double r, const Eigen::Vector3d& c = Eigen::Vector3d::Zero());
  static ShapeSpec ellipsoid(const Eigen::VectorXd& semi_axes);
  static ShapeSpec perturbed_sphere(double base, std::vector<Mode> modes);
  // Seeded random perturbation over all modes with 2 <= l <= max_l; when
  // origin_symmetric only even degrees are used.
  static ShapeSpec random_perturbed(int dim, double base, int max_l, double amplitude,
                                    unsigned seed, bool origin_symmetric = false);

  // closed-form support function value in direction z (unit vector)
  double evaluate(int dim, const Eigen::Vector3d& z) const;
};

// Samples the shape on the grid.  Perturbed-sphere amplitudes are scaled
// down automatically until the convexity margin is at least 10x the
// tolerance used by from_support.
SupportBody make_shape(const ShapeSpec& spec, std::shared_ptr<const SphericalGrid> grid);

struct Roundness {
  Eigen::VectorXd center;    // Steiner point estimate, dim+1
  double deviation = 0.0;    // relative sup deviation from the recentred mean radius
  double mean_radius = 0.0;
};

Roundness roundness(const SupportBody& body);
Roundness roundness(const SphericalGrid& grid, const Eigen::VectorXd& u);

// JSON serialization (schema minklab.body/1)
std::string body_to_json(const SupportBody& body);
SupportBody body_from_json(const std::string& text);

}  // namespace minklab
