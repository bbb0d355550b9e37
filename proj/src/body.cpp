#include "minklab/body.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

#include "minklab/harmonics.hpp"

namespace minklab {

namespace {

void principal_radii(const SymField& w, Eigen::MatrixXd& radii, double& min_radius) {
  const int sz = int(w.comp.rows());
  if (w.dim == 1) {
    radii = w.comp;
    min_radius = w.comp.col(0).minCoeff();
    return;
  }
  radii.resize(sz, 2);
  min_radius = std::numeric_limits<double>::max();
  for (int i = 0; i < sz; ++i) {
    const double a = w.comp(i, 0), b = w.comp(i, 1), c = w.comp(i, 2);
    const double mean = 0.5 * (a + c);
    const double d = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    radii(i, 0) = mean - d;
    radii(i, 1) = mean + d;
    min_radius = std::min(min_radius, mean - d);
  }
}

}  // namespace

SupportBody from_support(std::shared_ptr<const SphericalGrid> grid, const Eigen::VectorXd& u,
                         ConvexityCheck check) {
  if (!grid) throw std::invalid_argument("from_support: null grid");
  if (u.size() != grid->size()) throw std::invalid_argument("from_support: field size mismatch");
  if (u.minCoeff() <= 0.0)
    throw NonPositiveError("support function must be positive (origin interior)");

  SupportBody b;
  b.grid = grid;
  b.u = u;
  b.grad = grid->gradient(u);
  b.W = curvature_matrix(*grid, u);

  const double tol = 1e-8 * u.mean();
  principal_radii(b.W, b.radii, b.min_radius);
  if (check == ConvexityCheck::Strict && b.min_radius <= tol)
    throw NonConvexError("curvature matrix W is not positive definite (min radius " +
                         std::to_string(b.min_radius) + ")");

  const int sz = grid->size();
  const int amb = grid->dim() + 1;
  b.X.resize(sz, amb);
  b.r.resize(sz);
  b.area_density.resize(sz);
  for (int i = 0; i < sz; ++i) {
    Eigen::VectorXd x = u[i] * grid->nodes().row(i).transpose();
    for (int d = 0; d < grid->dim(); ++d)
      x += b.grad(i, d) * grid->frame(d).row(i).transpose();
    b.X.row(i) = x.transpose();
    b.r[i] = x.norm();
    b.area_density[i] = b.W.det(i);
  }
  return b;
}

ShapeSpec ShapeSpec::sphere(double r, const Eigen::Vector3d& c) {
  ShapeSpec s;
  s.kind = Kind::Sphere;
  s.radius = r;
  s.center = c;
  return s;
}

ShapeSpec ShapeSpec::ellipsoid(const Eigen::VectorXd& semi_axes) {
  ShapeSpec s;
  s.kind = Kind::Ellipsoid;
  s.semi_axes = semi_axes;
  return s;
}

ShapeSpec ShapeSpec::perturbed_sphere(double base, std::vector<Mode> modes) {
  ShapeSpec s;
  s.kind = Kind::PerturbedSphere;
  s.base_radius = base;
  s.modes = std::move(modes);
  return s;
}

ShapeSpec ShapeSpec::random_perturbed(int dim, double base, int max_l, double amplitude,
                                      unsigned seed, bool origin_symmetric) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Mode> modes;
  for (int l = 2; l <= max_l; ++l) {
    if (origin_symmetric && l % 2 != 0) continue;
    if (dim == 1) {
      modes.push_back({l, 0, amplitude * u(rng) / double(l)});
      modes.push_back({l, 1, amplitude * u(rng) / double(l)});
    } else {
      for (int m = -l; m <= l; ++m) modes.push_back({l, m, amplitude * u(rng) / double(l * l)});
    }
  }
  return perturbed_sphere(base, std::move(modes));
}

double ShapeSpec::evaluate(int dim, const Eigen::Vector3d& z) const {
  switch (kind) {
    case Kind::Sphere:
      return radius + center.head(dim + 1).dot(z.head(dim + 1));
    case Kind::Ellipsoid: {
      double s = 0.0;
      for (int i = 0; i <= dim; ++i) s += semi_axes[i] * semi_axes[i] * z[i] * z[i];
      return std::sqrt(s);
    }
    case Kind::PerturbedSphere: {
      double s = 1.0;
      if (dim == 1) {
        const double theta = std::atan2(z[1], z[0]);
        for (const auto& m : modes) s += m.eps * harmonics::circle_mode(m.l, m.m, theta);
      } else {
        const double theta = std::acos(std::clamp(z[2], -1.0, 1.0));
        const double phi = std::atan2(z[1], z[0]);
        for (const auto& m : modes) s += m.eps * harmonics::real_sph(m.l, m.m, theta, phi);
      }
      return base_radius * s;
    }
  }
  throw std::logic_error("unreachable");
}

SupportBody make_shape(const ShapeSpec& spec, std::shared_ptr<const SphericalGrid> grid) {
  const int dim = grid->dim();
  auto sample = [&](const ShapeSpec& s) {
    Eigen::VectorXd u(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
      Eigen::Vector3d z = Eigen::Vector3d::Zero();
      z.head(dim + 1) = grid->nodes().row(i).transpose();
      u[i] = s.evaluate(dim, z);
    }
    return u;
  };

  if (spec.kind != ShapeSpec::Kind::PerturbedSphere) return from_support(grid, sample(spec));

  // clamp amplitudes so the convexity margin stays at 10x the tolerance
  ShapeSpec trial = spec;
  for (int attempt = 0; attempt < 60; ++attempt) {
    Eigen::VectorXd u = sample(trial);
    if (u.minCoeff() > 0.0) {
      SymField w = curvature_matrix(*grid, u);
      Eigen::MatrixXd radii;
      double min_radius;
      principal_radii(w, radii, min_radius);
      if (min_radius > 10.0 * 1e-8 * u.mean()) return from_support(grid, u);
    }
    for (auto& m : trial.modes) m.eps *= 0.8;
  }
  throw NonConvexError("make_shape: could not clamp perturbation into the convex regime");
}

Roundness roundness(const SphericalGrid& grid, const Eigen::VectorXd& u) {
  const int amb = grid.dim() + 1;
  Roundness out;
  out.center.resize(amb);
  const double area = grid.area();
  for (int d = 0; d < amb; ++d)
    out.center[d] = double(amb) / area * grid.quadrature(u.cwiseProduct(grid.nodes().col(d)));

  Eigen::VectorXd recentred = u - grid.nodes() * out.center;
  out.mean_radius = grid.quadrature(recentred) / area;
  out.deviation =
      (recentred.array() - out.mean_radius).abs().maxCoeff() / std::abs(out.mean_radius);
  return out;
}

Roundness roundness(const SupportBody& body) { return roundness(*body.grid, body.u); }

std::string body_to_json(const SupportBody& body) {
  nlohmann::json j;
  j["schema"] = "minklab.body/1";
  j["n"] = body.dim();
  j["resolution"] = body.grid->resolution();
  j["u"] = std::vector<double>(body.u.data(), body.u.data() + body.u.size());
  return j.dump();
}

SupportBody body_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("schema").get<std::string>() != "minklab.body/1")
    throw std::invalid_argument("body_from_json: unknown schema");
  const int n = j.at("n").get<int>();
  const std::string res = j.at("resolution").get<std::string>();
  std::shared_ptr<const SphericalGrid> grid;
  if (n == 1) {
    grid = SphericalGrid::make_circle(std::stoi(res.substr(res.find('=') + 1)));
  } else {
    const auto x = res.find('x');
    grid = SphericalGrid::make_sphere(std::stoi(res.substr(0, x)), std::stoi(res.substr(x + 1)));
  }
  const auto vals = j.at("u").get<std::vector<double>>();
  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(vals.data(), long(vals.size()));
  return from_support(grid, u);
}

}  // namespace minklab
