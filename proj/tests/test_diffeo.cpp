#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "surfelastic/diffeo.hpp"
#include "surfelastic/srnf.hpp"
#include "test_util.hpp"

using namespace surfelastic;
namespace tt = surfelastic::testing;

namespace {
constexpr double kPi = std::numbers::pi;

DiffeoCoefficients coeffs_for(const VectorFieldBasis& basis,
                              const Eigen::VectorXd& xv) {
  return DiffeoCoefficients{xv, &basis};
}
}  // namespace

TEST_CASE("build_map: zero coefficients give the identity") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 3);
  SphereMap m = build_map(g, coeffs_for(b, Eigen::VectorXd::Zero(b.count)));
  CHECK((m.gamma - unit_sphere(g)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("build_map: random small coefficients stay on the sphere") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 5);
  auto& gen = tt::rng(100);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd xv = tt::random_vector(b.count, 0.05, gen);
    SphereMap m = build_map(g, coeffs_for(b, xv));
    for (int p = 0; p < g.points(); ++p)
      CHECK(std::abs(m.gamma.row(p).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("build_map: Killing field rotates azimuth by arctan(t)") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 1);
  // Element 2h+1 with h = (l=1,m=0) is the skew gradient of Y_1^0, i.e.
  // the z-axis rotation field proportional to sin(phi) e3.
  const int killing = 2 * 1 + 1;
  Eigen::VectorXd xv = Eigen::VectorXd::Zero(b.count);
  const double field_scale = 1.0 / b.u(0, 2 * 1);  // see below
  (void)field_scale;
  // Normalize so U = sin(phi) e3 exactly: basis stores v = const*sin(phi);
  // pick xv so the constant becomes 1.
  double c0 = b.v(g.index(0, 0), killing) / g.sin_phi[0];
  xv[killing] = 1.0 / c0;
  const double t = 0.37;
  SphereMap m = build_map(g, coeffs_for(b, xv), t);
  const double dtheta_expect = std::atan(t);
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      Vec3 im = m.gamma.row(g.index(i, j)).transpose();
      double th, ph;
      unit_to_angles(im, th, ph);
      double shift = th - g.theta[j];
      if (shift < -kPi) shift += 2 * kPi;
      if (shift > kPi) shift -= 2 * kPi;
      CHECK(shift == doctest::Approx(dtheta_expect).epsilon(1e-12));
      // Closed form of the projection: cos(phi') = cos/|W|.
      double wnorm = std::sqrt(g.sin_phi[i] * g.sin_phi[i] * (1 + t * t) +
                               g.cos_phi[i] * g.cos_phi[i]);
      CHECK(std::cos(ph) ==
            doctest::Approx(g.cos_phi[i] / wnorm).epsilon(1e-12));
    }
  // Small t: the map is a pure rotation up to O(t^2).
  const double ts = 1e-3;
  SphereMap ms = build_map(g, coeffs_for(b, xv), ts);
  double ang = std::atan(ts);
  double worst = 0.0;
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      Vec3 rotated(g.sin_phi[i] * std::cos(g.theta[j] + ang),
                   g.sin_phi[i] * std::sin(g.theta[j] + ang), g.cos_phi[i]);
      worst = std::max(worst,
                       (ms.gamma.row(g.index(i, j)).transpose() - rotated)
                           .norm());
    }
  CHECK(worst < 5.0 * ts * ts);
}

TEST_CASE("step_bound: Killing field is unbounded") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 2);
  Eigen::VectorXd xv = Eigen::VectorXd::Zero(b.count);
  xv[2 * 1 + 1] = 0.8;  // skew gradient of Y_1^0
  CHECK(std::isinf(step_bound(g, coeffs_for(b, xv))));
}

TEST_CASE("step_bound: grad(cos phi) has bound 1 on the grid") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 1);
  // Element 2h with h=(1,0) is grad(Y_1^0) normalized; rescale so
  // U = grad(cos phi) = -sin(phi) e2.
  const int k = 2 * 1;
  Eigen::VectorXd xv = Eigen::VectorXd::Zero(b.count);
  double c0 = -b.u(g.index(0, 0), k) / g.sin_phi[0];
  xv[k] = 1.0 / c0;
  // lambda_1 = -cos(phi); the grid infimum is -cos(phi_0).
  double bound = step_bound(g, coeffs_for(b, xv));
  CHECK(bound == doctest::Approx(1.0 / g.cos_phi[0]).epsilon(1e-10));
}

TEST_CASE("jacobian_det: identity at t=0 and the grad(cos phi) closed form") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 1);
  const int k = 2 * 1;
  Eigen::VectorXd xv = Eigen::VectorXd::Zero(b.count);
  double c0 = -b.u(g.index(0, 0), k) / g.sin_phi[0];
  xv[k] = 1.0 / c0;

  ScalarField d0 = jacobian_det(g, coeffs_for(b, xv), 0.0);
  CHECK((d0.array() - 1.0).abs().maxCoeff() == 0.0);

  // D = (1 - 0.5 cos)^2 + 0.25 sin^2 (1 - 0.5 cos) at t = 0.5.
  ScalarField d = jacobian_det(g, coeffs_for(b, xv), 0.5);
  for (int i = 0; i < g.n_phi; ++i) {
    double c = g.cos_phi[i], s = g.sin_phi[i];
    double expect = (1 - 0.5 * c) * (1 - 0.5 * c) +
                    0.25 * s * s * (1 - 0.5 * c);
    for (int j = 0; j < g.n_theta; ++j)
      CHECK(d[g.index(i, j)] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("jacobian_det: algebraic equals geometric on random fields") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 6);
  auto& gen = tt::rng(200);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd xv = tt::random_vector(b.count, 0.1, gen);
    double t = 0.17 + 0.1 * trial / 20.0;
    ScalarField alg = jacobian_det(g, coeffs_for(b, xv), t);
    ScalarField geo = jacobian_det_geometric(g, coeffs_for(b, xv), t);
    double scale = alg.cwiseAbs().maxCoeff();
    CHECK((alg - geo).cwiseAbs().maxCoeff() < 1e-9 * scale);
  }
}

TEST_CASE("step_bound soundness: positive Jacobian below the bound") {
  SphericalGrid g = build_grid(12, 25);
  VectorFieldBasis b = vectorfield_basis(g, 7);
  auto& gen = tt::rng(300);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd xv = tt::random_vector(b.count, 0.4, gen);
    DiffeoCoefficients c = coeffs_for(b, xv);
    double bound = step_bound(g, c);
    REQUIRE(bound > 0.0);
    for (double frac : {0.25, 0.5, 0.9, 0.99}) {
      double t = std::isinf(bound) ? frac * 10.0 : frac * bound;
      ScalarField d = jacobian_det(g, c, t);
      CHECK(d.minCoeff() > 0.0);
    }
    // Lower-bound inequality from the proof: D >= (1 + lambda1 t)^2
    // wherever 1 + lambda1 t > 0.
    TangentField f = assemble_field(b, xv);
    double t = std::isinf(bound) ? 1.0 : 0.9 * bound;
    ScalarField d = jacobian_det(g, c, t);
    for (int p = 0; p < g.points(); ++p) {
      double l1 = 0.5 * ((f.a[p] + f.d[p]) -
                         std::hypot(f.a[p] - f.d[p], f.b[p] + f.c[p]));
      double margin = 1.0 + l1 * t;
      if (margin > 0) CHECK(d[p] >= margin * margin - 1e-12);
    }
  }
}

TEST_CASE("resample: identity is bit-exact, sphere returns the map") {
  SphericalGrid g = build_grid(200, 149);
  auto& gen = tt::rng(400);
  HarmonicBasis hb = surface_basis(g, 4);
  Field3 f = tt::random_surface(g, hb, 0.2, gen);
  CHECK(resample(g, f, SphereMap::identity(g)) == f);

  // f = identity embedding: f o gamma = gamma.
  VectorFieldBasis b = vectorfield_basis(g, 4);
  Eigen::VectorXd xv = tt::random_vector(b.count, 0.05, gen);
  SphereMap m = build_map(g, coeffs_for(b, xv));
  Field3 r = resample(g, unit_sphere(g), m);
  CHECK((r - m.gamma).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("resample: composing with the numerical inverse returns f") {
  SphericalGrid g = build_grid(50, 99);
  auto& gen = tt::rng(500);
  HarmonicBasis hb = surface_basis(g, 3);
  Field3 f = tt::random_surface(g, hb, 0.15, gen);
  VectorFieldBasis b = vectorfield_basis(g, 3);
  Eigen::VectorXd xv = tt::random_vector(b.count, 0.04, gen);
  SphereMap m = build_map(g, coeffs_for(b, xv));
  SphereMap minv = invert_map(g, m);
  Field3 once = resample(g, f, m);
  Field3 back = resample(g, once, minv);
  CHECK((back - f).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("resample: rotations preserve area") {
  SphericalGrid g = build_grid(50, 99);
  auto& gen = tt::rng(600);
  HarmonicBasis hb = surface_basis(g, 3);
  Field3 f = tt::random_surface(g, hb, 0.15, gen);
  // A rotation acting as a reparametrization of the sphere.
  Eigen::Matrix3d r =
      Eigen::AngleAxisd(0.4, Vec3(1, 2, 0.5).normalized()).toRotationMatrix();
  SphereMap m;
  m.gamma = unit_sphere(g) * r.transpose();
  Field3 fr = resample(g, f, m);
  double a0 = surface_area(g, f);
  double a1 = surface_area(g, fr);
  CHECK(a1 == doctest::Approx(a0).epsilon(1e-4));
}

TEST_CASE("sampler derivatives match finite differences") {
  SphericalGrid g = build_grid(25, 49);
  auto& gen = tt::rng(700);
  HarmonicBasis hb = surface_basis(g, 4);
  Field3 f = tt::random_surface(g, hb, 0.2, gen);
  SurfaceSampler sampler(g, f);
  std::uniform_real_distribution<double> uth(0.0, 2 * kPi), uph(0.1, kPi - 0.1);
  const double h = 1e-6;
  for (int k = 0; k < 50; ++k) {
    double th = uth(gen), ph = uph(gen);
    Vec3 v, dth, dph;
    sampler.value_and_jacobian(th, ph, v, dth, dph);
    Vec3 fd_th = (sampler.value(th + h, ph) - sampler.value(th - h, ph)) /
                 (2 * h);
    Vec3 fd_ph = (sampler.value(th, ph + h) - sampler.value(th, ph - h)) /
                 (2 * h);
    CHECK((dth - fd_th).norm() < 1e-6 + 1e-6 * fd_th.norm());
    CHECK((dph - fd_ph).norm() < 1e-6 + 1e-6 * fd_ph.norm());
  }
}
