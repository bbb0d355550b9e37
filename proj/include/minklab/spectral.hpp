#pragma once

#include <vector>

#include "minklab/body.hpp"

// The local Brunn-Minkowski spectral estimate on a convex body: the
// quadratic-form gap, its discrete generalized eigenvalues, the radial-power
// test functions, and the derived moment inequalities (for k = n, and the
// sigma_k variant with k < n which requires alpha >= 0).

namespace minklab::spectral {

struct SpectralProblem {
  SupportBody body;
  int k;  // sigma_k weight; k = n is the main case

  int n() const { return body.dim(); }
  // per-node density of dV_k = u sigma_k(W) dsigma
  Eigen::VectorXd dv_density() const;
  double total_measure() const;
};

SpectralProblem make_problem(SupportBody body, int k);

struct GapResult {
  double gap = 0.0;    // RHS - LHS of the inequality; nonnegative in exact arithmetic
  double scale = 0.0;  // sum of the absolute values of the terms
  bool projected = false;
};

// Dirichlet-minus-mass gap of the spectral estimate (k = n only):
//   integral of u^2 cof(W)(grad f, grad f) dsigma  -  n * integral of f^2 dV_n.
// f is projected onto mean-dV_n-zero when needed (flagged in the result).
GapResult bm_gap(const SpectralProblem& problem, const Eigen::VectorXd& f);

// Smallest `count` generalized eigenvalues of the pair (Dirichlet form,
// n * mass form) on mean-dV_n-zero fields; the constant zero mode is removed.
// The minimum is 1 for every strictly convex body, with multiplicity n+1.
std::vector<double> bm_eigenvalues(const SpectralProblem& problem, int count);

// The n+1 fields |X|^alpha <X, E_l> recentred to mean-dV_k zero.
std::vector<Eigen::VectorXd> paper_test_functions(const SpectralProblem& problem, double alpha);

// Moment inequality gap (RHS - LHS).  k = n accepts any real alpha; k < n
// requires alpha >= 0 and uses the sigma_{k+1}/sigma_k form.
GapResult moment_gap(const SpectralProblem& problem, double alpha);

// The same quantity assembled from bm_gap over the paper test functions;
// agreement with moment_gap is the numerical content of the lemma's proof.
// Only valid for k = n.
GapResult moment_gap_via_test_functions(const SpectralProblem& problem, double alpha);

}  // namespace minklab::spectral
