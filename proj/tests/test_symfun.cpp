#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <minklab/symfun.hpp>

#include <cmath>
#include <random>

using namespace minklab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd tuple(std::initializer_list<double> v) {
  VectorXd x(int(v.size()));
  int i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

MatrixXd random_rotation(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<MatrixXd> qr(m);
  return qr.householderQ();
}

MatrixXd from_eigenvalues(const VectorXd& lambda, std::mt19937_64& rng) {
  MatrixXd q = random_rotation(int(lambda.size()), rng);
  return q * lambda.asDiagonal() * q.transpose();
}

}  // namespace

TEST_CASE("elem_sym on fixed tuples") {
  auto p = symfun::elem_sym(tuple({1, 1, 1}));
  for (int k = 0; k <= 3; ++k) CHECK(p[k] == doctest::Approx(1.0).epsilon(1e-14));

  p = symfun::elem_sym(tuple({1, 2, 3}));
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(2.0));
  CHECK(p[2] == doctest::Approx(11.0 / 3.0));
  CHECK(p[3] == doctest::Approx(6.0));

  CHECK(symfun::p_k(tuple({1, 2, 3}), 4) == 0.0);
  CHECK(symfun::p_k(tuple({1, 2, 3}), 0) == 1.0);
}

TEST_CASE("elem_sym recurrence matches brute-force enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + int(rng() % 8);
    VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = u(rng);
    auto s = symfun::sigma_all(lambda);
    for (int k = 0; k <= n; ++k) {
      const double ref = symfun::oracle::sigma_bruteforce(lambda, k);
      CHECK(s[k] == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("matrix elem_sym agrees with eigenvalue path") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + int(rng() % 5);
    VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = u(rng);
    MatrixXd a = from_eigenvalues(lambda, rng);
    auto pm = symfun::elem_sym(a);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
    auto pe = symfun::elem_sym(VectorXd(es.eigenvalues()));
    for (int k = 0; k <= n; ++k) CHECK(pm[k] == doctest::Approx(pe[k]).epsilon(1e-10));
  }
}

TEST_CASE("mixed_elem_sym basic identities") {
  std::mt19937_64 rng(13);
  const int n = 3;
  VectorXd lambda = tuple({0.7, 1.4, 2.2});
  MatrixXd a = from_eigenvalues(lambda, rng);

  SUBCASE("all arguments equal reduces to p_k") {
    for (int k = 1; k <= n; ++k) {
      std::vector<MatrixXd> mats(k, a);
      CHECK(symfun::mixed_elem_sym(mats) == doctest::Approx(symfun::p_k(a, k)).epsilon(1e-12));
    }
  }

  SUBCASE("padding with identities up to n slots collapses") {
    MatrixXd b = from_eigenvalues(tuple({0.5, 2.0, 1.1}), rng);
    std::vector<MatrixXd> two{a, b};
    std::vector<MatrixXd> padded{a, b, MatrixXd::Identity(n, n)};
    CHECK(symfun::mixed_elem_sym(padded) ==
          doctest::Approx(symfun::mixed_elem_sym(two)).epsilon(1e-12));
  }

  SUBCASE("diag example against polarization oracle") {
    MatrixXd d1 = tuple({1, 2}).asDiagonal();
    MatrixXd d2 = tuple({3, 4}).asDiagonal();
    std::vector<MatrixXd> mats{d1, d2};
    CHECK(symfun::mixed_elem_sym(mats) == doctest::Approx(5.0).epsilon(1e-14));
    const double viaDet = ((d1 + d2).determinant() - d1.determinant() - d2.determinant()) / 2.0;
    CHECK(symfun::mixed_elem_sym(mats) == doctest::Approx(viaDet).epsilon(1e-14));
  }
}

TEST_CASE("mixed_elem_sym is symmetric, multilinear, and matches delta expansion") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + int(rng() % 3);
    const int k = 2 + int(rng() % (n - 1));
    std::vector<MatrixXd> mats;
    for (int i = 0; i < k; ++i) {
      VectorXd lambda(n);
      for (int j = 0; j < n; ++j) lambda[j] = u(rng);
      mats.push_back(from_eigenvalues(lambda, rng));
    }
    const double base = symfun::mixed_elem_sym(mats);
    CHECK(base == doctest::Approx(symfun::oracle::mixed_elem_sym_delta(mats)).epsilon(1e-10));

    auto shuffled = mats;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(symfun::mixed_elem_sym(shuffled) == doctest::Approx(base).epsilon(1e-10));

    // multilinearity in the first slot
    auto scaled = mats;
    scaled[0] = 2.5 * mats[0] + 0.5 * mats[1];
    const double lhs = symfun::mixed_elem_sym(scaled);
    auto second = mats;
    second[0] = mats[1];
    const double rhs = 2.5 * base + 0.5 * symfun::mixed_elem_sym(second);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("mixed_pair") {
  MatrixXd d1 = tuple({1, 2}).asDiagonal();
  MatrixXd d2 = tuple({3, 4}).asDiagonal();
  CHECK(symfun::mixed_pair(d1, d2, 1, 1) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(symfun::mixed_pair(d1, d2, 2, 0) == doctest::Approx(symfun::p_k(d1, 2)).epsilon(1e-14));
  MatrixXd id3 = MatrixXd::Identity(3, 3);
  CHECK(symfun::mixed_pair(id3, id3, 2, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)symfun::mixed_pair(d1, d2, 2, 1), std::invalid_argument);
}

TEST_CASE("gamma_k membership") {
  CHECK(symfun::gamma_k_membership(MatrixXd(MatrixXd::Identity(3, 3))).max_k == 3);
  MatrixXd d = tuple({3, -1}).asDiagonal();
  auto m = symfun::gamma_k_membership(d);
  CHECK(m.max_k == 1);
  CHECK(m.per_k[0] == doctest::Approx(1.0));
  CHECK(m.per_k[1] == doctest::Approx(-3.0));
  CHECK(symfun::gamma_k_membership(MatrixXd(MatrixXd::Zero(2, 2))).max_k == 0);
}

TEST_CASE("newton_maclaurin_gap") {
  CHECK(symfun::newton_maclaurin_gap(tuple({0.8, 0.8, 0.8}), 2, 1) ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK(symfun::newton_maclaurin_gap(tuple({1, 2, 3}), 2, 1) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK_THROWS_AS((void)symfun::newton_maclaurin_gap(tuple({1, -2, 0.5}), 2, 1),
                  std::domain_error);

  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-0.5, 2.0);
  int tested = 0;
  while (tested < 2000) {
    const int n = 2 + int(rng() % 5);
    VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = u(rng);
    const int maxk = symfun::gamma_k_membership(lambda).max_k;
    if (maxk < 2) continue;
    const double scale = std::pow(lambda.norm() / std::sqrt(double(n)) + 1.0, maxk);
    for (int k = 2; k <= maxk; ++k)
      for (int l = 1; l < k; ++l)
        CHECK(symfun::newton_maclaurin_gap(lambda, k, l) >= -1e-12 * scale);
    ++tested;
  }
}

TEST_CASE("garding_gap") {
  std::mt19937_64 rng(16);

  SUBCASE("fixed examples") {
    MatrixXd d1 = tuple({1, 2}).asDiagonal();
    MatrixXd d2 = tuple({3, 4}).asDiagonal();
    std::vector<MatrixXd> mats{d1, d2};
    CHECK(symfun::garding_gap(mats) == doctest::Approx(5.0 - std::sqrt(24.0)).epsilon(1e-12));

    std::vector<MatrixXd> equal{d1, d1};
    CHECK(symfun::garding_gap(equal) == doctest::Approx(0.0).epsilon(1e-13));

    MatrixXd id = MatrixXd::Identity(3, 3);
    std::vector<MatrixXd> prop{id, 2.0 * id, 0.5 * id};
    CHECK(symfun::garding_gap(prop) == doctest::Approx(0.0).epsilon(1e-13));
  }

  SUBCASE("nonnegative on random Gamma_k samples") {
    std::uniform_real_distribution<double> u(0.1, 2.5);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 2 + int(rng() % 3);
      const int k = 2 + int(rng() % (n - 1));
      std::vector<MatrixXd> mats;
      double scale = 1.0;
      for (int i = 0; i < k; ++i) {
        VectorXd lambda(n);
        for (int j = 0; j < n; ++j) lambda[j] = u(rng);
        mats.push_back(from_eigenvalues(lambda, rng));
        scale *= lambda.maxCoeff();
      }
      CHECK(symfun::garding_gap(mats) >= -1e-12 * scale);
    }
  }

  SUBCASE("pair form") {
    MatrixXd id = MatrixXd::Identity(2, 2);
    CHECK(symfun::pair_garding_gap(id, 2.0 * id, 1, 1) == doctest::Approx(0.0).epsilon(1e-13));
    MatrixXd d1 = tuple({1, 2}).asDiagonal();
    MatrixXd d2 = tuple({3, 4}).asDiagonal();
    CHECK(symfun::pair_garding_gap(d1, d2, 1, 1) ==
          doctest::Approx(5.0 - std::sqrt(24.0)).epsilon(1e-12));
  }
}

TEST_CASE("interpolation gap (blended index form)") {
  VectorXd lambda = tuple({0.4, 1.3, 2.6, 0.9});
  // alpha = 1/2 blends k=3, l=1 to index 2
  const double gap = symfun::interpolation_gap(lambda, 3, 1, 0.5);
  CHECK(gap >= 0.0);
  auto p = symfun::elem_sym(lambda);
  CHECK(gap == doctest::Approx(p[2] - std::sqrt(p[3] * p[1])).epsilon(1e-12));

  CHECK(symfun::interpolation_gap(tuple({1.5, 1.5, 1.5}), 3, 1, 0.5) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)symfun::interpolation_gap(lambda, 3, 2, 0.3), std::invalid_argument);
}

TEST_CASE("newton_tensor") {
  MatrixXd a = tuple({1, 2, 3}).asDiagonal();
  CHECK(symfun::newton_tensor(a, 0).isApprox(MatrixXd::Identity(3, 3)));
  MatrixXd t1 = symfun::newton_tensor(a, 1);
  CHECK(t1(0, 0) == doctest::Approx(5.0));
  CHECK(t1(1, 1) == doctest::Approx(4.0));
  CHECK(t1(2, 2) == doctest::Approx(3.0));
  CHECK(symfun::newton_tensor(a, 2).trace() == doctest::Approx(11.0));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + int(rng() % 4);
    VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = u(rng);
    MatrixXd m = from_eigenvalues(lambda, rng);
    auto s = symfun::sigma_all(m);
    for (int k = 0; k < n; ++k) {
      MatrixXd t = symfun::newton_tensor(m, k);
      CHECK((t - t.transpose()).norm() < 1e-10);
      CHECK(t.trace() == doctest::Approx((n - k) * s[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("delta_weighted_sum closed form matches direct expansion") {
  std::mt19937_64 rng(18);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + int(rng() % 3);
    const int k = int(rng() % n);  // 0 <= k <= n-1
    MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = g(rng);  // deliberately nonsymmetric
    VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
    }
    const double fast = symfun::delta_weighted_sum(x, y, b, k);
    const double slow = symfun::oracle::delta_weighted_sum_direct(x, y, b, k);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
  }
}
