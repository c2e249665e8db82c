#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "surfelastic/differential.hpp"
#include "surfelastic/grid.hpp"
#include "surfelastic/harmonics.hpp"
#include "test_util.hpp"

using namespace surfelastic;
namespace tt = surfelastic::testing;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double k4Pi = 4.0 * std::numbers::pi;

Field3 scaled_sphere(const SphericalGrid& g, double r) {
  return r * unit_sphere(g);
}

Field3 ellipsoid(const SphericalGrid& g, double ax, double ay, double az) {
  Field3 f = unit_sphere(g);
  f.col(0) *= ax;
  f.col(1) *= ay;
  f.col(2) *= az;
  return f;
}
}  // namespace

TEST_CASE("grid: weights sum to the sphere area within the stated bound") {
  for (auto [nt, np] : {std::pair{4, 3}, {12, 25}, {25, 49}, {50, 99}}) {
    SphericalGrid g = build_grid(nt, np);
    ScalarField ones = ScalarField::Ones(g.points());
    double total = integrate(g, ones);
    double eps = 2.0 / (double(np) * np);
    CHECK(std::abs(total - k4Pi) <= k4Pi * eps);
  }
  // The coarse (4,3) case stays within 8 percent.
  SphericalGrid g = build_grid(4, 3);
  double total = integrate(g, ScalarField::Ones(g.points()));
  CHECK(std::abs(total - k4Pi) / k4Pi < 0.08);
  // (25,49) within 0.05 percent.
  g = build_grid(25, 49);
  total = integrate(g, ScalarField::Ones(g.points()));
  CHECK(std::abs(total - k4Pi) / k4Pi < 5e-4);
}

TEST_CASE("grid: rejects dimensions below the minima") {
  CHECK_THROWS_AS(build_grid(3, 25), ValidationError);
  CHECK_THROWS_AS(build_grid(12, 2), ValidationError);
}

TEST_CASE("grid: phi rows are interior midpoints, theta equispaced") {
  SphericalGrid g = build_grid(12, 25);
  for (int i = 0; i < g.n_phi; ++i) {
    CHECK(g.phi[i] == doctest::Approx((i + 0.5) * kPi / 25).epsilon(1e-14));
    CHECK(g.sin_phi[i] > 0.0);
  }
  for (int j = 0; j < g.n_theta; ++j)
    CHECK(g.theta[j] == doctest::Approx(j * 2.0 * kPi / 12).epsilon(1e-14));
}

TEST_CASE("grid: quadrature error of the constant decays quadratically") {
  double prev = -1.0;
  for (int np : {12, 24, 48}) {
    SphericalGrid g = build_grid(8, np);
    double err =
        std::abs(integrate(g, ScalarField::Ones(g.points())) - k4Pi);
    if (prev > 0) CHECK(prev / err >= 3.5);
    prev = err;
  }
}

TEST_CASE("grid: analytic integrals") {
  SphericalGrid g = build_grid(25, 49);
  ScalarField cos2(g.points()), odd(g.points());
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      cos2[g.index(i, j)] = g.cos_phi[i] * g.cos_phi[i];
      odd[g.index(i, j)] = g.sin_phi[i] * std::cos(g.theta[j]);
    }
  CHECK(integrate(g, cos2) == doctest::Approx(k4Pi / 3.0).epsilon(2e-3));
  CHECK(std::abs(integrate(g, odd)) < 1e-12);
}

TEST_CASE("grid: pole reconstruction is consistent on smooth surfaces") {
  for (auto [nt, np] : {std::pair{12, 25}, {25, 49}}) {
    SphericalGrid g = build_grid(nt, np);
    Field3 f = ellipsoid(g, 1.0, 1.0, 1.3);
    auto v = validate_surface(g, f);
    CHECK(v.pole_spread_north < 1e-10);
    CHECK(v.pole_spread_south < 1e-10);
    Vec3 north = pole_point(g, f, true);
    CHECK((north - Vec3(0, 0, 1.3)).norm() < 1e-8);
    Vec3 south = pole_point(g, f, false);
    CHECK((south - Vec3(0, 0, -1.3)).norm() < 1e-8);
  }
}

TEST_CASE("grid: seam mismatch of 1e-3 on a diameter-1 surface is rejected") {
  SphericalGrid g = build_grid(25, 49);
  Field3 f = scaled_sphere(g, 0.5);  // diameter 1
  // Sample a non-periodic ramp: f(2pi) - f(0) = 1e-3 in y.
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      f(g.index(i, j), 1) += 1e-3 * (g.theta[j] / (2.0 * kPi));
  CHECK_THROWS_AS(validate_surface(g, f), ValidationError);
}

TEST_CASE("grid: pole inconsistency is rejected") {
  SphericalGrid g = build_grid(25, 49);
  Field3 f = scaled_sphere(g, 1.0);
  // Theta-smooth corruption of the two rows nearest the north pole: the
  // columns no longer converge to a single point.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      f(g.index(i, j), 2) += 1e-3 * std::cos(2.0 * g.theta[j]);
  CHECK_THROWS_AS(validate_surface(g, f), ValidationError);
}

TEST_CASE("harmonics: element counts match the closed forms") {
  SphericalGrid g = build_grid(12, 25);
  for (int deg = 1; deg <= 11; ++deg) {
    CHECK(3 * harmonic_count(deg) == 3 * ((deg + 1) * (deg + 1) - 1));
    CHECK(vectorfield_count(deg) == 2 * (deg + 1) * (deg + 1) - 2);
  }
  CHECK(surface_basis(g, 7).count() == 189);
  CHECK(surface_basis(g, 1).count() == 9);
  CHECK(surface_basis(g, 5).count() == 105);
  CHECK(vectorfield_basis(g, 7).count == 126);
  CHECK(vectorfield_basis(g, 1).count == 6);
}

TEST_CASE("harmonics: low-order closed forms and derivatives") {
  SphericalGrid g = build_grid(25, 49);
  HarmonicTable t = harmonic_table(g, 2);
  const int h10 = 1 * 1 - 1 + (0 + 1);   // (l=1, m=0)
  const int h11 = 1 * 1 - 1 + (1 + 1);   // (l=1, m=1)
  const int h21 = 2 * 2 - 1 + (1 + 2);   // (l=2, m=1)
  const double c10 = std::sqrt(3.0 / k4Pi);
  const double c21 = std::sqrt(15.0 / k4Pi);
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      int p = g.index(i, j);
      double s = g.sin_phi[i], c = g.cos_phi[i], th = g.theta[j];
      CHECK(t.y(p, h10) == doctest::Approx(c10 * c).epsilon(1e-12));
      CHECK(t.y_phi(p, h10) == doctest::Approx(-c10 * s).epsilon(1e-12));
      CHECK(t.y(p, h11) ==
            doctest::Approx(c10 * s * std::cos(th)).epsilon(1e-12));
      CHECK(t.y(p, h21) ==
            doctest::Approx(c21 * s * c * std::cos(th)).epsilon(1e-12));
      CHECK(t.y_phi(p, h21) ==
            doctest::Approx(c21 * (c * c - s * s) * std::cos(th))
                .epsilon(1e-12));
      CHECK(t.y_theta(p, h21) ==
            doctest::Approx(-c21 * s * c * std::sin(th)).epsilon(1e-12));
    }
}

TEST_CASE("harmonics: Gram matrix is diagonal to quadrature order") {
  // Midpoint quadrature is second order, so off-diagonals scale with
  // d_phi^2; they also halve twice when the grid doubles.
  double off_prev = -1.0;
  for (auto [nt, np] : {std::pair{25, 49}, {50, 99}}) {
    SphericalGrid g = build_grid(nt, np);
    HarmonicTable t = harmonic_table(g, 5);
    Eigen::VectorXd w(g.points());
    for (int i = 0; i < g.n_phi; ++i)
      for (int j = 0; j < g.n_theta; ++j)
        w[g.index(i, j)] = g.row_weight[i];
    Eigen::MatrixXd gram = t.y.transpose() * w.asDiagonal() * t.y;
    double off = 0.0, diag_dev = 0.0;
    for (int a = 0; a < t.count; ++a) {
      diag_dev = std::max(diag_dev, std::abs(gram(a, a) - 1.0));
      for (int b = 0; b < t.count; ++b)
        if (a != b) off = std::max(off, std::abs(gram(a, b)));
    }
    double dphi2 = g.d_phi * g.d_phi;
    CHECK(off <= 0.5 * dphi2);
    CHECK(diag_dev <= 0.5 * dphi2);
    if (off_prev > 0) CHECK(off / off_prev < 0.5);
    off_prev = off;
  }
}

TEST_CASE("harmonics: vector field basis is normalized and paired") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 4);
  Eigen::VectorXd w(g.points());
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) w[g.index(i, j)] = g.row_weight[i];
  for (int k = 0; k < b.count; ++k) {
    double n2 = (b.u.col(k).cwiseAbs2() + b.v.col(k).cwiseAbs2()).dot(w);
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-6));
  }
  // Gradient / skew-gradient pairs are pointwise orthogonal.
  for (int h = 0; h < b.count / 2; ++h) {
    double ip = (b.u.col(2 * h).cwiseProduct(b.u.col(2 * h + 1)) +
                 b.v.col(2 * h).cwiseProduct(b.v.col(2 * h + 1)))
                    .dot(w);
    CHECK(std::abs(ip) < 1e-12);
  }
}

TEST_CASE("harmonics: grad(Y_1^0) is -sin(phi) e2 up to normalization") {
  SphericalGrid g = build_grid(25, 49);
  VectorFieldBasis b = vectorfield_basis(g, 1);
  const int k = 2 * 1;  // gradient element of (l=1, m=0)
  // Expected: u = const * (-sin phi), v = 0, after normalization the
  // constant is fixed by |grad Y_1^0| = sqrt(l(l+1)) = sqrt(2).
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      int p = g.index(i, j);
      CHECK(std::abs(b.v(p, k)) < 1e-14);
      CHECK(b.u(p, k) < 0.0);
      CHECK(b.u(p, k) / g.sin_phi[i] ==
            doctest::Approx(b.u(g.index(0, 0), k) / g.sin_phi[0])
                .epsilon(1e-10));
    }
}

TEST_CASE("harmonics: analytic covariant gradient matches stencils") {
  // The stencil oracle is only second order, so compare on a fine grid
  // away from the poles where 1/sin(phi) amplifies its truncation error.
  SphericalGrid g = build_grid(160, 99);
  VectorFieldBasis b = vectorfield_basis(g, 3);
  auto& gen = tt::rng(77);
  Eigen::VectorXd xv = tt::random_vector(b.count, 0.3, gen);
  TangentField f = assemble_field(b, xv);

  // Stencil derivatives of the component fields via `differential`
  // (pack u and v into coordinate slots of a Field3).
  Field3 uv = Field3::Zero(g.points(), 3);
  uv.col(0) = f.u;
  uv.col(1) = f.v;
  OneForm d = differential(g, uv);
  double scale = f.u.cwiseAbs().maxCoeff() + f.v.cwiseAbs().maxCoeff();
  double tol = 2e-2 * scale;
  for (int i = 10; i + 10 < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      int p = g.index(i, j);
      double cot = g.cos_phi[i] / g.sin_phi[i];
      // a = u_phi, b = v_phi, c = u_theta/sin - v cot, d = v_theta/sin + u cot
      CHECK(std::abs(f.a[p] - d.m(p, 3)) < tol);
      CHECK(std::abs(f.b[p] - d.m(p, 4)) < tol);
      CHECK(std::abs(f.c[p] - (d.m(p, 0) - f.v[p] * cot)) < tol);
      CHECK(std::abs(f.d[p] - (d.m(p, 1) + f.u[p] * cot)) < tol);
    }

  // Divergence theorem: int tr(nabla U) = 0 up to quadrature error.
  ScalarField div = f.a + f.d;
  CHECK(std::abs(integrate(g, div)) < 0.1 * g.d_phi * g.d_phi * scale);
}

TEST_CASE("differential: round sphere frame and scaling") {
  SphericalGrid g = build_grid(25, 49);
  Field3 f = unit_sphere(g);
  OneForm a = differential(g, f);
  double tol = 0.25 * (g.d_theta * g.d_theta + g.d_phi * g.d_phi);
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      int p = g.index(i, j);
      Mat32 m = a.at(p);
      CHECK((m.col(0) - g.e3(i, j)).norm() < tol);
      CHECK((m.col(1) - g.e2(i, j)).norm() < tol);
      Mat2 gram = m.transpose() * m;
      CHECK((gram - Mat2::Identity()).norm() < 3 * tol);
    }

  // Homogeneity: alpha^T alpha scales by r^2.
  OneForm a2 = differential(g, scaled_sphere(g, 2.0));
  for (int p = 0; p < g.points(); ++p)
    CHECK((a2.at(p) - 2.0 * a.at(p)).norm() < 1e-14);
}

TEST_CASE("differential: linear, annihilates constants") {
  SphericalGrid g = build_grid(12, 25);
  auto& gen = tt::rng(3);
  HarmonicBasis basis = surface_basis(g, 4);
  Field3 f1 = tt::random_surface(g, basis, 0.3, gen);
  Field3 f2 = tt::random_surface(g, basis, 0.3, gen);
  OneForm d1 = differential(g, f1);
  OneForm d2 = differential(g, f2);
  OneForm dsum = differential(g, f1 + f2);
  double scale = d1.m.cwiseAbs().maxCoeff();
  CHECK((dsum.m - d1.m - d2.m).cwiseAbs().maxCoeff() < 1e-12 * scale);

  // d(const) = 0 exactly: equal values cancel bit-for-bit.
  Field3 constant = Field3::Zero(g.points(), 3);
  constant.col(0).array() = 17.0;
  constant.col(2).array() = -3.5;
  CHECK(differential(g, constant).m.cwiseAbs().maxCoeff() == 0.0);

  // Shifting f by a constant changes nothing beyond rounding.
  Field3 shifted = f1 + constant;
  OneForm dshift = differential(g, shifted);
  CHECK((dshift.m - d1.m).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("differential: matches a refined finite-difference oracle") {
  // f = identity sphere + 0.1 * Y_2^1 in the z slot, evaluated
  // analytically; oracle uses centered differences with 4x finer steps.
  SphericalGrid g = build_grid(120, 99);
  const double c21 = std::sqrt(15.0 / k4Pi);
  auto fval = [&](double th, double ph) -> Vec3 {
    Vec3 v(std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th),
           std::cos(ph));
    v[2] += 0.1 * c21 * std::sin(ph) * std::cos(ph) * std::cos(th);
    return v;
  };
  Field3 f(g.points(), 3);
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      f.row(g.index(i, j)) = fval(g.theta[j], g.phi[i]).transpose();
  OneForm a = differential(g, f);

  const double ht = g.d_theta / 4.0, hp = g.d_phi / 4.0;
  double worst = 0.0;
  for (int i = 0; i < g.n_phi; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      double th = g.theta[j], ph = g.phi[i];
      Vec3 dth = (fval(th + ht, ph) - fval(th - ht, ph)) / (2 * ht) /
                 g.sin_phi[i];
      Vec3 dph = (fval(th, ph + hp) - fval(th, ph - hp)) / (2 * hp);
      Mat32 oracle;
      oracle.col(0) = dth;
      oracle.col(1) = dph;
      worst = std::max(worst, (a.at(g.index(i, j)) - oracle).norm());
    }
  CHECK(worst < 1e-3);
}

TEST_CASE("differential: adjoint identity") {
  SphericalGrid g = build_grid(12, 25);
  auto& gen = tt::rng(9);
  HarmonicBasis basis = surface_basis(g, 3);
  Field3 f = tt::random_surface(g, basis, 0.5, gen);
  OneForm w = tt::random_form(g, 1.0, gen);
  OneForm df = differential(g, f);
  Field3 dtw = differential_adjoint(g, w);
  double lhs = (df.m.array() * w.m.array()).sum();
  double rhs = (f.array() * dtw.array()).sum();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}
