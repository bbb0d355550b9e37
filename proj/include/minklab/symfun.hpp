#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

// Elementary symmetric functions, their mixed (polarized) forms, Garding
// cones and Newton tensors for small dense matrices.  Everything here is a
// pure function of its arguments; nothing allocates global state.

namespace minklab::symfun {

// C(n,k) as a double; 0 outside the Pascal triangle.
double binom(int n, int k);

// sigma_0..sigma_n of an eigenvalue tuple, computed as the coefficients of
// prod_i (t + lambda_i).  The recurrence avoids the cancellation of
// inclusion-exclusion style evaluations.
std::vector<double> sigma_all(const Eigen::VectorXd& lambda);

// sigma_0..sigma_n of a square matrix via principal-minor sums (eigen-free).
std::vector<double> sigma_all(const Eigen::MatrixXd& a);

// Normalized versions P_k = sigma_k / C(n,k), k = 0..n.
std::vector<double> elem_sym(const Eigen::VectorXd& lambda);
std::vector<double> elem_sym(const Eigen::MatrixXd& a);

// Single P_k; returns 0 for k > n, 1 for k = 0.
double p_k(const Eigen::VectorXd& lambda, int k);
double p_k(const Eigen::MatrixXd& a, int k);

// Normalized mixed elementary symmetric function P_k(A^1,...,A^k).
// Symmetric and multilinear in its arguments; reduces to p_k when all
// arguments coincide.  k = mats.size() must satisfy 1 <= k <= n <= 6.
double mixed_elem_sym(const std::vector<Eigen::MatrixXd>& mats);

// P_{k,l}(A, B): k copies of A and l copies of B, k + l <= n.
double mixed_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int k, int l);

struct ConeMembership {
  int max_k = 0;                 // largest k with P_1..P_k all above tol
  std::vector<double> per_k;     // P_1..P_n
};

// Gamma_k cone membership.  tol < 0 selects the default 1e-10 * ||A||_F
// margin (the cones are open; discrete data needs one).
ConeMembership gamma_k_membership(const Eigen::MatrixXd& a, double tol = -1.0);
ConeMembership gamma_k_membership(const Eigen::VectorXd& lambda, double tol = -1.0);

bool in_gamma_k(const Eigen::VectorXd& lambda, int k, double tol = -1.0);
bool in_gamma_k(const Eigen::MatrixXd& a, int k, double tol = -1.0);

// Newton-MacLaurin gap P_l*P_{k-1} - P_k*P_{l-1} for 1 <= l < k <= n.
// Nonnegative on Gamma_k; zero exactly at constant tuples.  Throws
// std::domain_error when lambda is not in Gamma_k.
double newton_maclaurin_gap(const Eigen::VectorXd& lambda, int k, int l);

// Garding gap P_k(A^1,...,A^k) - prod_i P_k(A^i)^{1/k}.  Nonnegative when
// every argument lies in Gamma_k; zero at pairwise proportional arguments.
double garding_gap(const std::vector<Eigen::MatrixXd>& mats);

// Pair form: P_{k,l}(A,B) - P_{k+l}(A)^{k/(k+l)} * P_{k+l}(B)^{l/(k+l)}
// for A, B in Gamma_{k+l}.
double pair_garding_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int k, int l);

// Interpolation gap P_{k*alpha+l*(1-alpha)} - P_k^alpha * P_l^(1-alpha) for
// lambda in Gamma_k ∩ Gamma_l, alpha in (0,1).  The blended index
// k*alpha + l*(1-alpha) must be an integer in {0..n}; anything else is
// rejected rather than interpolated.
double interpolation_gap(const Eigen::VectorXd& lambda, int k, int l, double alpha);

// k-th Newton tensor T^k(A) = sigma_k(A) Id - T^{k-1}(A) A, T^0 = Id,
// 0 <= k <= n-1.  Valid for general (not necessarily symmetric) A; for
// symmetric A the result is symmetric with trace (n-k) sigma_k(A).
Eigen::MatrixXd newton_tensor(const Eigen::MatrixXd& a, int k);

// Weighted generalized-Kronecker contraction of order k+1:
//   sum delta^{m, j_2..j_{k+1}}_{m', i_2..i_{k+1}}
//       x_{m'} y_m  B_{i_2 j_2} ... B_{i_{k+1} j_{k+1}}
// which collapses to k! * x^T T^k(B^T) y.  The closed form is used in
// production; the brute-force expansion below is the test oracle.
double delta_weighted_sum(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::MatrixXd& b, int k);

namespace oracle {

// Brute-force subset enumeration of sigma_k; test oracle for sigma_all.
double sigma_bruteforce(const Eigen::VectorXd& lambda, int k);

// Direct expansion of the generalized Kronecker delta against the factor
// list: factor t contributes F^t_{l_t, u_t}.  mats.size() determines the
// order.  Cost n^p * p!; intended for n <= 6 test use only.
double delta_contract(const std::vector<Eigen::MatrixXd>& factors);

// Mixed elementary symmetric function by delta expansion (unnormalized
// sigma form divided by C(n,k) at the end).
double mixed_elem_sym_delta(const std::vector<Eigen::MatrixXd>& mats);

// Weighted sum by direct expansion; the orientation oracle for
// delta_weighted_sum.
double delta_weighted_sum_direct(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::MatrixXd& b, int k);

}  // namespace oracle

}  // namespace minklab::symfun
