#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <minklab/body.hpp>

#include <cmath>

using namespace minklab;
using Eigen::VectorXd;

TEST_CASE("unit sphere body") {
  for (int dim : {1, 2}) {
    auto grid = SphericalGrid::make(dim, dim == 1 ? 64 : 24);
    auto body = make_shape(ShapeSpec::sphere(1.0), grid);
    CHECK((body.r.array() - 1.0).abs().maxCoeff() < 1e-11);
    CHECK((body.area_density.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK((body.radii.array() - 1.0).abs().maxCoeff() < 1e-10);

    auto round = roundness(body);
    CHECK(round.center.norm() < 1e-12);
    CHECK(round.deviation < 1e-12);
  }
}

TEST_CASE("offset sphere: translation moves X but not W") {
  for (int dim : {1, 2}) {
    auto grid = SphericalGrid::make(dim, dim == 1 ? 128 : 32);
    Eigen::Vector3d c(0.3, -0.1, dim == 2 ? 0.2 : 0.0);
    auto centered = make_shape(ShapeSpec::sphere(1.0), grid);
    auto shifted = make_shape(ShapeSpec::sphere(1.0, c), grid);

    const double wtol = dim == 1 ? 1e-12 : 1e-6;  // S^2 pole rings are 5th order
    CHECK((centered.W.comp - shifted.W.comp).array().abs().maxCoeff() < wtol);
    for (int i = 0; i < grid->size(); ++i) {
      Eigen::VectorXd dx = (shifted.X.row(i) - centered.X.row(i)).transpose();
      CHECK((dx - c.head(dim + 1)).norm() < 1e-8);
    }

    // r^2 = u^2 + |grad u|^2 and u <= r
    for (int i = 0; i < grid->size(); ++i) {
      const double rhs = shifted.u[i] * shifted.u[i] + shifted.grad.row(i).squaredNorm();
      CHECK(shifted.r[i] * shifted.r[i] == doctest::Approx(rhs).epsilon(1e-12));
      CHECK(shifted.u[i] <= shifted.r[i] + 1e-13);
    }

    auto round = roundness(shifted);
    CHECK((round.center.head(dim + 1) - c.head(dim + 1)).norm() < 1e-9);
    CHECK(round.deviation < 1e-9);
  }
}

TEST_CASE("ellipse curvature radius identity u^3 (u'' + u) = a^2 b^2") {
  auto grid = SphericalGrid::make(1, 256);
  const double a = 1.3, b = 0.8;
  VectorXd axes(2);
  axes << a, b;
  auto body = make_shape(ShapeSpec::ellipsoid(axes), grid);
  const double target = a * a * b * b;
  for (int i = 0; i < grid->size(); ++i) {
    const double rho = body.W.comp(i, 0);
    CHECK(std::pow(body.u[i], 3) * rho == doctest::Approx(target).epsilon(1e-9));
  }

  auto round = roundness(body);
  CHECK(round.center.norm() < 1e-10);
  CHECK(round.deviation > 0.01);
}

TEST_CASE("scaling covariance") {
  auto grid = SphericalGrid::make(2, 24);
  auto spec = ShapeSpec::random_perturbed(2, 1.0, 4, 0.08, 7);
  auto body = make_shape(spec, grid);
  const double lam = 1.7;
  auto scaled = from_support(grid, VectorXd(lam * body.u));
  CHECK((scaled.W.comp - lam * body.W.comp).array().abs().maxCoeff() < 1e-10);
  CHECK((scaled.r - lam * body.r).lpNorm<Eigen::Infinity>() < 1e-10);
  const int n = grid->dim();
  CHECK((scaled.area_density - std::pow(lam, n) * body.area_density).lpNorm<Eigen::Infinity>() <
        1e-9);
}

TEST_CASE("principal radii multiply to the area density") {
  auto grid = SphericalGrid::make(2, 24);
  auto body = make_shape(ShapeSpec::random_perturbed(2, 1.0, 4, 0.1, 3), grid);
  for (int i = 0; i < grid->size(); ++i)
    CHECK(body.radii(i, 0) * body.radii(i, 1) ==
          doctest::Approx(body.area_density[i]).epsilon(1e-11));
}

TEST_CASE("error paths") {
  auto grid = SphericalGrid::make(1, 64);
  VectorXd bad = VectorXd::Ones(grid->size());
  bad[3] = -0.2;
  CHECK_THROWS_AS((void)from_support(grid, bad), NonPositiveError);

  // a large pure mode breaks convexity: u = 1 + 0.9 cos(4 theta)
  VectorXd wob(grid->size());
  for (int i = 0; i < grid->size(); ++i)
    wob[i] = 1.0 + 0.9 * std::cos(4.0 * 2.0 * M_PI * i / grid->size());
  CHECK_THROWS_AS((void)from_support(grid, wob), NonConvexError);

  // make_shape clamps the same perturbation into a valid body
  auto clamped = make_shape(ShapeSpec::perturbed_sphere(1.0, {{4, 0, 0.9}}), grid);
  CHECK(clamped.min_radius > 0.0);
  CHECK(roundness(clamped).deviation > 0.0);
}

TEST_CASE("origin-symmetric random shapes really are even") {
  for (int dim : {1, 2}) {
    auto grid = SphericalGrid::make(dim, dim == 1 ? 64 : 24);
    auto body = make_shape(ShapeSpec::random_perturbed(dim, 1.0, 6, 0.1, 11, true), grid);
    for (int i = 0; i < grid->size(); ++i)
      CHECK(body.u[i] == doctest::Approx(body.u[grid->antipode(i)]).epsilon(1e-12));
  }
}

TEST_CASE("json round trip") {
  auto grid = SphericalGrid::make(1, 32);
  auto body = make_shape(ShapeSpec::random_perturbed(1, 1.0, 5, 0.1, 21), grid);
  auto text = body_to_json(body);
  auto back = body_from_json(text);
  CHECK(back.dim() == 1);
  CHECK((back.u - body.u).lpNorm<Eigen::Infinity>() < 1e-15);
}
