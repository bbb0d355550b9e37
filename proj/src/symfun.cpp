#include "minklab/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace minklab::symfun {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

std::vector<double> sigma_all(const Eigen::VectorXd& lambda) {
  const int n = int(lambda.size());
  if (n < 1) throw std::invalid_argument("sigma_all: empty tuple");
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  return e;
}

namespace {

double principal_minor_sum(const Eigen::MatrixXd& a, int k) {
  const int n = int(a.rows());
  if (k == 0) return 1.0;
  if (k == 1) return a.trace();
  if (k == n) return a.determinant();
  // enumerate k-subsets of {0..n-1}
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  double sum = 0.0;
  while (true) {
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = a(idx[r], idx[c]);
    sum += sub.determinant();
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sum;
}

void require_square(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("expected a nonempty square matrix");
}

}  // namespace

std::vector<double> sigma_all(const Eigen::MatrixXd& a) {
  require_square(a);
  const int n = int(a.rows());
  std::vector<double> s(n + 1);
  for (int k = 0; k <= n; ++k) s[k] = principal_minor_sum(a, k);
  return s;
}

std::vector<double> elem_sym(const Eigen::VectorXd& lambda) {
  auto s = sigma_all(lambda);
  const int n = int(lambda.size());
  for (int k = 0; k <= n; ++k) s[k] /= binom(n, k);
  return s;
}

std::vector<double> elem_sym(const Eigen::MatrixXd& a) {
  auto s = sigma_all(a);
  const int n = int(a.rows());
  for (int k = 0; k <= n; ++k) s[k] /= binom(n, k);
  return s;
}

double p_k(const Eigen::VectorXd& lambda, int k) {
  const int n = int(lambda.size());
  if (k < 0) throw std::invalid_argument("p_k: negative order");
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  return elem_sym(lambda)[k];
}

double p_k(const Eigen::MatrixXd& a, int k) {
  require_square(a);
  const int n = int(a.rows());
  if (k < 0) throw std::invalid_argument("p_k: negative order");
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  return principal_minor_sum(a, k) / binom(n, k);
}

double mixed_elem_sym(const std::vector<Eigen::MatrixXd>& mats) {
  const int k = int(mats.size());
  if (k < 1) throw std::invalid_argument("mixed_elem_sym: empty argument list");
  const int n = int(mats[0].rows());
  for (const auto& m : mats)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("mixed_elem_sym: dimension mismatch");
  if (k > n) throw std::invalid_argument("mixed_elem_sym: k > n");
  if (n > 6) throw std::invalid_argument("mixed_elem_sym: n > 6 not supported");

  bool all_equal = true;
  for (int i = 1; i < k && all_equal; ++i) all_equal = mats[i].isApprox(mats[0], 0.0);
  if (all_equal) return p_k(mats[0], k);

  if (k <= 4) {
    // polarization: k! * M = sum over nonempty subsets S of (-1)^{k-|S|} sigma_k(sum_S A_i)
    double acc = 0.0;
    const int total = 1 << k;
    for (int mask = 1; mask < total; ++mask) {
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
      int card = 0;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) {
          sum += mats[i];
          ++card;
        }
      const double sign = ((k - card) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * principal_minor_sum(sum, k);
    }
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    return acc / (kfact * binom(n, k));
  }
  return oracle::mixed_elem_sym_delta(mats);
}

double mixed_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int k, int l) {
  require_square(a);
  const int n = int(a.rows());
  if (b.rows() != n || b.cols() != n)
    throw std::invalid_argument("mixed_pair: dimension mismatch");
  if (k < 0 || l < 0 || k + l > n) throw std::invalid_argument("mixed_pair: need 0 <= k+l <= n");
  const int m = k + l;
  if (m == 0) return 1.0;
  if (l == 0) return p_k(a, k);
  if (k == 0) return p_k(b, l);
  // polarization with repeated arguments collapses to a double sum
  double acc = 0.0;
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= l; ++j) {
      if (i == 0 && j == 0) continue;
      const double sign = ((m - i - j) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binom(k, i) * binom(l, j) * principal_minor_sum(double(i) * a + double(j) * b, m);
    }
  double mfact = 1.0;
  for (int i = 2; i <= m; ++i) mfact *= i;
  return acc / (mfact * binom(n, m));
}

namespace {

double default_tol(double scale) { return 1e-10 * scale; }

ConeMembership membership_from_p(const std::vector<double>& p, double tol) {
  ConeMembership out;
  const int n = int(p.size()) - 1;
  out.per_k.assign(p.begin() + 1, p.end());
  out.max_k = 0;
  for (int k = 1; k <= n; ++k) {
    if (p[k] > tol)
      out.max_k = k;
    else
      break;
  }
  return out;
}

}  // namespace

ConeMembership gamma_k_membership(const Eigen::MatrixXd& a, double tol) {
  require_square(a);
  if (tol < 0) tol = default_tol(a.norm());
  return membership_from_p(elem_sym(a), tol);
}

ConeMembership gamma_k_membership(const Eigen::VectorXd& lambda, double tol) {
  if (tol < 0) tol = default_tol(lambda.norm());
  return membership_from_p(elem_sym(lambda), tol);
}

bool in_gamma_k(const Eigen::VectorXd& lambda, int k, double tol) {
  return gamma_k_membership(lambda, tol).max_k >= k;
}

bool in_gamma_k(const Eigen::MatrixXd& a, int k, double tol) {
  return gamma_k_membership(a, tol).max_k >= k;
}

double newton_maclaurin_gap(const Eigen::VectorXd& lambda, int k, int l) {
  const int n = int(lambda.size());
  if (!(1 <= l && l < k && k <= n))
    throw std::invalid_argument("newton_maclaurin_gap: need 1 <= l < k <= n");
  if (!in_gamma_k(lambda, k))
    throw std::domain_error("newton_maclaurin_gap: tuple not in Gamma_k");
  const auto p = elem_sym(lambda);
  return p[l] * p[k - 1] - p[k] * p[l - 1];
}

double garding_gap(const std::vector<Eigen::MatrixXd>& mats) {
  const int k = int(mats.size());
  if (k < 1) throw std::invalid_argument("garding_gap: empty argument list");
  double geo = 1.0;
  for (const auto& m : mats) {
    if (!in_gamma_k(m, k)) throw std::domain_error("garding_gap: argument not in Gamma_k");
    geo *= std::pow(p_k(m, k), 1.0 / double(k));
  }
  return mixed_elem_sym(mats) - geo;
}

double pair_garding_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int k, int l) {
  const int m = k + l;
  if (m < 1) throw std::invalid_argument("pair_garding_gap: k + l >= 1 required");
  if (!in_gamma_k(a, m) || !in_gamma_k(b, m))
    throw std::domain_error("pair_garding_gap: argument not in Gamma_{k+l}");
  const double geo =
      std::pow(p_k(a, m), double(k) / double(m)) * std::pow(p_k(b, m), double(l) / double(m));
  return mixed_pair(a, b, k, l) - geo;
}

double interpolation_gap(const Eigen::VectorXd& lambda, int k, int l, double alpha) {
  const int n = int(lambda.size());
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("interpolation_gap: alpha must lie in (0,1)");
  const double beta = 1.0 - alpha;
  const double blend = k * alpha + l * beta;
  const double rounded = std::round(blend);
  if (std::abs(blend - rounded) > 1e-9 || rounded < 0.0 || rounded > double(n))
    throw std::invalid_argument("interpolation_gap: k*alpha + l*beta must be an integer in {0..n}");
  if (!in_gamma_k(lambda, k) || !in_gamma_k(lambda, l))
    throw std::domain_error("interpolation_gap: tuple not in Gamma_k ∩ Gamma_l");
  const auto p = elem_sym(lambda);
  return p[int(rounded)] - std::pow(p[k], alpha) * std::pow(p[l], beta);
}

Eigen::MatrixXd newton_tensor(const Eigen::MatrixXd& a, int k) {
  require_square(a);
  const int n = int(a.rows());
  if (k < 0 || k > n - 1) throw std::invalid_argument("newton_tensor: need 0 <= k <= n-1");
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
  if (k == 0) return t;
  const auto s = sigma_all(a);
  for (int j = 1; j <= k; ++j) t = s[j] * Eigen::MatrixXd::Identity(n, n) - t * a;
  return t;
}

double delta_weighted_sum(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::MatrixXd& b, int k) {
  // rows of b pair with lower delta slots, so the tensor acts through b^T
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  return kfact * x.dot(newton_tensor(b.transpose(), k) * y);
}

namespace oracle {

double sigma_bruteforce(const Eigen::VectorXd& lambda, int k) {
  const int n = int(lambda.size());
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  double sum = 0.0;
  while (true) {
    double prod = 1.0;
    for (int i : idx) prod *= lambda[i];
    sum += prod;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sum;
}

double delta_contract(const std::vector<Eigen::MatrixXd>& factors) {
  const int p = int(factors.size());
  const int n = int(factors[0].rows());
  // value = sum over distinct lower tuples l and permutations pi of
  //         sgn(pi) * prod_t F^t_{l_t, l_pi(t)}
  std::vector<int> lower(p, 0);
  std::vector<int> perm(p);
  double total = 0.0;
  while (true) {
    bool distinct = true;
    for (int i = 0; i < p && distinct; ++i)
      for (int j = i + 1; j < p; ++j)
        if (lower[i] == lower[j]) {
          distinct = false;
          break;
        }
    if (distinct) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        int inversions = 0;
        for (int i = 0; i < p; ++i)
          for (int j = i + 1; j < p; ++j)
            if (perm[i] > perm[j]) ++inversions;
        const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
        double prod = sign;
        for (int t = 0; t < p; ++t) prod *= factors[t](lower[t], lower[perm[t]]);
        total += prod;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    int i = p - 1;
    while (i >= 0 && lower[i] == n - 1) {
      lower[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++lower[i];
  }
  return total;
}

double mixed_elem_sym_delta(const std::vector<Eigen::MatrixXd>& mats) {
  const int k = int(mats.size());
  const int n = int(mats[0].rows());
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  double nmkfact = 1.0;
  for (int i = 2; i <= n - k; ++i) nmkfact *= i;
  return nmkfact / nfact * delta_contract(mats);
}

double delta_weighted_sum_direct(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::MatrixXd& b, int k) {
  std::vector<Eigen::MatrixXd> factors;
  factors.push_back(x * y.transpose());  // F^1_{l,u} = x_l y_u
  for (int i = 0; i < k; ++i) factors.push_back(b);
  return delta_contract(factors);
}

}  // namespace oracle

}  // namespace minklab::symfun
