#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minklab/body.hpp"

// Residual evaluation, damped Newton solution, normalized-flow evolution and
// parameter sweeps for the curvature equations on the sphere.  All residuals
// are in log form: log(LHS) - log(RHS) nodewise.

namespace minklab::solver {

struct Callable1 {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::string label;

  static Callable1 one();
  static Callable1 power(double a);    // s^a
  static Callable1 exp_neg();          // e^{-s}
};

struct Callable2 {
  std::function<double(double, double)> f;
  std::function<double(double, double)> d1;
  std::function<double(double, double)> d2;
  std::string label;

  static Callable2 one();
  static Callable2 power(double a, double b);  // u^a r^b
};

enum class Family {
  OrliczCM,           // phi(u) P_k(W) = f
  QuotientIsotropic,  // (P_k/P_l)^{1/(k-l)} = psi(u, r)
  LpDual,             // u^{1-p} r^{q-n-1} det W = f
  LpGauss,            // u^{1-p} e^{-r^2/2} det W = f
  LpDualCM,           // u^{1-p} r^{q-k-1} sigma_k(W) = f
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct ProblemSpec {
  int n = 1;
  Family family = Family::LpDual;
  int k = 1;
  int l = 0;
  double p = 2.0;
  double q = 2.0;
  Eigen::VectorXd f;  // data on the grid; empty means f == 1
  Callable1 phi = Callable1::one();
  Callable2 psi = Callable2::one();

  static ProblemSpec lp_dual(int n, double p, double q);
  static ProblemSpec lp_gauss(int n, double p);
  static ProblemSpec lp_dual_cm(int n, int k, double p, double q);
  static ProblemSpec orlicz_cm(int n, int k, Callable1 phi);
  static ProblemSpec quotient(int n, int k, int l, Callable2 psi);

  // order of the Gamma cone the iterates must stay in (n for det families)
  int cone_order() const;
  // exact radius of the centred-sphere solution, when one exists in closed
  // form or by scalar root-finding; empty if the family has none for these
  // parameters (with f == 1).
  std::optional<double> exact_sphere_radius() const;
};

// Nodewise log-residual.  Throws std::domain_error when the iterate leaves
// the admissible cone or an LHS factor is nonpositive.
Eigen::VectorXd residual(const SupportBody& body, const ProblemSpec& spec);
Eigen::VectorXd residual(const std::shared_ptr<const SphericalGrid>& grid,
                         const Eigen::VectorXd& u, const ProblemSpec& spec);

// Exact directional derivative of the discrete log-residual (same spectral
// operators as the residual path).
Eigen::VectorXd apply_linearization(const std::shared_ptr<const SphericalGrid>& grid,
                                    const Eigen::VectorXd& u, const ProblemSpec& spec,
                                    const Eigen::VectorXd& du);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 60;
  bool origin_symmetric = false;
  double min_damping = 9.5367431640625e-07;  // 2^-20
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = std::numeric_limits<double>::infinity();
  Eigen::VectorXd u;
  std::shared_ptr<const SphericalGrid> grid;
  std::optional<SupportBody> body;  // set when the solution is strictly convex
  Roundness round;
  std::string init_label;  // continuation provenance
  std::string failure;     // "line_search", "left_cone", "max_iter" when !converged
};

// Damped Newton on the log-residual.  The initial iterate must be positive
// and inside the cone (throws otherwise); iteration failures are recorded in
// the report, not thrown.
SolveReport newton_solve(const std::shared_ptr<const SphericalGrid>& grid,
                         const Eigen::VectorXd& init, const ProblemSpec& spec,
                         const SolveOptions& opts = {});
SolveReport newton_solve(const SupportBody& init, const ProblemSpec& spec,
                         const SolveOptions& opts = {});

// sup of the log-residual of the report's solution re-evaluated on a
// once-refined grid (discretization consistency check)
double recheck_on_refined(const SolveReport& report, const ProblemSpec& spec);

struct FlowInstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlowOptions {
  int steps = 2000;
  double dt = 1e-3;
  bool normalize = true;
  double tol = 1e-10;  // early stop on fixed-point distance
};

struct FlowReport {
  int steps_taken = 0;
  double residual_norm = 0.0;        // sup |F| at the end
  double gauge_residual_norm = 0.0;  // sup |F - mean F| (scaling gauge removed)
  double fixed_point_distance = 0.0; // sup per-step change of log u after renormalization
  Eigen::VectorXd u;
  Roundness round;
};

// Explicit evolution d(log u)/dt = exp(F), renormalized each step to unit
// mean radius so homothetic solutions are fixed points.  Throws
// FlowInstabilityError when the step monitor trips.
FlowReport flow_run(const SupportBody& init, const ProblemSpec& spec, const FlowOptions& opts);

struct SweepOptions {
  int inits_per_point = 10;
  unsigned seed = 0;
  int threads = 1;
  bool origin_symmetric = false;
  bool warm_start = true;  // continuation along each row of the grid
  int max_mode = 4;
  double amplitude = 0.1;
  SolveOptions solve;
};

struct SweepRecord {
  double p = 0.0, q = 0.0;
  int attempted = 0;
  int converged = 0;
  int distinct = 0;           // clusters of scale-normalized solutions
  double max_roundness = 0.0;  // over converged solves
  double max_center = 0.0;
  double max_residual = 0.0;
  std::vector<SolveReport> reports;
};

// Solves the spec at every (p, q) of the grid from seeded perturbed-sphere
// initializations.  Points fan out across `threads` workers row by row;
// records come back in grid order regardless of scheduling.
std::vector<SweepRecord> sweep(const std::shared_ptr<const SphericalGrid>& grid,
                               const ProblemSpec& spec_template,
                               const std::vector<std::pair<double, double>>& pq_points,
                               const SweepOptions& opts);

}  // namespace minklab::solver
