#include "surfelastic/diffeo.hpp"

#include "surfelastic/differential.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace surfelastic {

namespace {
constexpr double kPi = std::numbers::pi;

void check_coeffs(const SphericalGrid& grid, const DiffeoCoefficients& c) {
  if (!c.basis) throw ValidationError("diffeo: missing vector field basis");
  if (c.basis->grid == nullptr || !c.basis->grid->same_shape(grid))
    throw ValidationError("diffeo: basis built on a different grid");
  if (c.xv.size() != c.basis->count)
    throw ValidationError("diffeo: coefficient length mismatch");
  if (!c.xv.allFinite())
    throw ValidationError("diffeo: non-finite coefficients");
}
}  // namespace

SphereMap build_map(const SphericalGrid& grid, const DiffeoCoefficients& c,
                    double t) {
  check_coeffs(grid, c);
  TangentField f = assemble_field(*c.basis, c.xv);
  SphereMap map;
  map.gamma.resize(grid.points(), 3);
  for (int i = 0; i < grid.n_phi; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      const int p = grid.index(i, j);
      Vec3 w = grid.e1(i, j) + t * (f.u[p] * grid.e2(i, j) +
                                    f.v[p] * grid.e3(i, j));
      double n = w.norm();
      if (n < 1e-9)
        throw ValidationError("build_map: Id + tU vanishes at phi row " +
                              std::to_string(i) + ", theta column " +
                              std::to_string(j));
      map.gamma.row(p) = (w / n).transpose();
    }
  return map;
}

double step_bound(const SphericalGrid& grid, const DiffeoCoefficients& c) {
  check_coeffs(grid, c);
  TangentField f = assemble_field(*c.basis, c.xv);
  double min_l1 = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (int p = 0; p < grid.points(); ++p) {
    const double a = f.a[p], b = f.b[p], cc = f.c[p], d = f.d[p];
    scale = std::max(scale, std::abs(a) + std::abs(b) + std::abs(cc) +
                                std::abs(d));
    const double l1 =
        0.5 * ((a + d) - std::hypot(a - d, b + cc));
    min_l1 = std::min(min_l1, l1);
  }
  if (min_l1 >= -1e-12 * std::max(1.0, scale))
    return std::numeric_limits<double>::infinity();
  return -1.0 / min_l1;
}

ScalarField jacobian_det(const SphericalGrid& grid,
                         const DiffeoCoefficients& c, double t) {
  check_coeffs(grid, c);
  TangentField f = assemble_field(*c.basis, c.xv);
  ScalarField out(grid.points());
  for (int p = 0; p < grid.points(); ++p) {
    const double a = f.a[p], b = f.b[p], cc = f.c[p], d = f.d[p];
    const double u = f.u[p], v = f.v[p];
    const double det_m = (1.0 + t * a) * (1.0 + t * d) - t * t * b * cc;
    // JU = (-v, u); quadratic form with (1 + tM).
    const double q = (-v) * ((1.0 + t * a) * (-v) + t * b * u) +
                     u * (t * cc * (-v) + (1.0 + t * d) * u);
    out[p] = det_m + t * t * q;
  }
  return out;
}

ScalarField jacobian_det_geometric(const SphericalGrid& grid,
                                   const DiffeoCoefficients& c, double t) {
  check_coeffs(grid, c);
  TangentField f = assemble_field(*c.basis, c.xv);
  ScalarField out(grid.points());
  for (int i = 0; i < grid.n_phi; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      const int p = grid.index(i, j);
      const Vec3 e1 = grid.e1(i, j), e2 = grid.e2(i, j), e3 = grid.e3(i, j);
      const double s = grid.sin_phi[i], cp = grid.cos_phi[i];
      const Vec3 w = e1 + t * (f.u[p] * e2 + f.v[p] * e3);
      // W_phi = e2 + t (u_phi e2 - u e1 + v_phi e3)
      const Vec3 w_phi =
          e2 + t * (f.a[p] * e2 - f.u[p] * e1 + f.b[p] * e3);
      // W_theta = s e3 + t (u_theta e2 + u cos e3 + v_theta e3
      //                     - v s e1 - v cos e2)
      // with u_theta = s*c_entry + v cos, v_theta = s*d_entry - u cos.
      const double u_th = s * f.c[p] + f.v[p] * cp;
      const double v_th = s * f.d[p] - f.u[p] * cp;
      const Vec3 w_theta = s * e3 + t * (u_th * e2 + f.u[p] * cp * e3 +
                                         v_th * e3 - f.v[p] * s * e1 -
                                         f.v[p] * cp * e2);
      out[p] = w.dot(w_phi.cross(w_theta)) / s;
    }
  return out;
}

ScalarField jacobian_of_map(const SphericalGrid& grid, const SphereMap& map) {
  OneForm d = differential(grid, map.gamma);
  ScalarField out(grid.points());
  for (int p = 0; p < grid.points(); ++p) {
    Mat32 m = d.at(p);
    // Columns are already (1/sin phi) d/dtheta and d/dphi; the signed
    // area ratio is gamma . (gamma_phi x gamma_theta/sin).
    out[p] = Vec3(map.gamma.row(p)).dot(m.col(1).cross(m.col(0)));
  }
  return out;
}

void unit_to_angles(const Vec3& x, double& theta, double& phi) {
  theta = std::atan2(x[1], x[0]);
  if (theta < 0) theta += 2.0 * kPi;
  phi = std::acos(std::clamp(x[2], -1.0, 1.0));
}

SurfaceSampler::SurfaceSampler(const SphericalGrid& grid, const Field3& f)
    : grid_(grid) {
  if (f.rows() != grid.points())
    throw ValidationError("SurfaceSampler: field size mismatch");
  const int nt = grid.n_theta, np = grid.n_phi;
  ext_.resize(np + 4, 3 * nt);
  auto put_row = [&](int ext_row, const Eigen::MatrixXd& row_vals) {
    for (int c = 0; c < 3; ++c)
      ext_.row(ext_row).segment(c * nt, nt) = row_vals.col(c).transpose();
  };
  Eigen::MatrixXd row(nt, 3), shifted(nt, 3);
  auto grab = [&](int i) {
    for (int j = 0; j < nt; ++j) row.row(j) = f.row(grid.index(i, j));
  };
  auto shift = [&]() {
    for (int c = 0; c < 3; ++c)
      shifted.col(c) = trig_shift_half_turn(row.col(c));
  };
  for (int i = 0; i < np; ++i) {
    grab(i);
    put_row(i + 2, row);
  }
  grab(1);
  shift();
  put_row(0, shifted);
  grab(0);
  shift();
  put_row(1, shifted);
  grab(np - 1);
  shift();
  put_row(np + 2, shifted);
  grab(np - 2);
  shift();
  put_row(np + 3, shifted);
}

namespace {

// Catmull-Rom weights for fraction x in [0,1], and their derivatives.
inline void catmull_rom(double x, double w[4]) {
  w[0] = ((2.0 - x) * x - 1.0) * x * 0.5;
  w[1] = (((3.0 * x - 5.0) * x) * x + 2.0) * 0.5;
  w[2] = ((4.0 - 3.0 * x) * x + 1.0) * x * 0.5;
  w[3] = (x - 1.0) * x * x * 0.5;
}

inline void catmull_rom_deriv(double x, double dw[4]) {
  dw[0] = (4.0 * x - 3.0 * x * x - 1.0) * 0.5;
  dw[1] = (9.0 * x * x - 10.0 * x) * 0.5;
  dw[2] = (8.0 * x - 9.0 * x * x + 1.0) * 0.5;
  dw[3] = (3.0 * x * x - 2.0 * x) * 0.5;
}

}  // namespace

template <bool WithDerivs>
void SurfaceSampler::sample(double theta, double phi, Vec3& val, Vec3* dth,
                            Vec3* dph) const {
  const int nt = grid_.n_theta, np = grid_.n_phi;
  // Pole-aware clamp: phi stays in [0, pi]; theta wraps periodically.
  phi = std::clamp(phi, 0.0, kPi);
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0) theta += 2.0 * kPi;

  double s = phi / grid_.d_phi - 0.5 + 2.0;  // row coord in ext_
  int i0 = static_cast<int>(std::floor(s));
  i0 = std::clamp(i0, 1, np + 1);
  double fx = s - i0;
  double r = theta / grid_.d_theta;
  int j0 = static_cast<int>(std::floor(r));
  j0 = std::min(j0, nt - 1);
  double fy = r - j0;

  double wp[4], wt[4], dwp[4], dwt[4];
  catmull_rom(fx, wp);
  catmull_rom(fy, wt);
  if constexpr (WithDerivs) {
    catmull_rom_deriv(fx, dwp);
    catmull_rom_deriv(fy, dwt);
  }

  int cols[4];
  for (int b = 0; b < 4; ++b) cols[b] = (j0 - 1 + b + nt) % nt;

  for (int c = 0; c < 3; ++c) {
    double v = 0.0, vth = 0.0, vph = 0.0;
    for (int a = 0; a < 4; ++a) {
      const auto row = ext_.row(i0 - 1 + a).segment(c * nt, nt);
      double rv = 0.0, rdv = 0.0;
      for (int b = 0; b < 4; ++b) {
        rv += wt[b] * row[cols[b]];
        if constexpr (WithDerivs) rdv += dwt[b] * row[cols[b]];
      }
      v += wp[a] * rv;
      if constexpr (WithDerivs) {
        vth += wp[a] * rdv;
        vph += dwp[a] * rv;
      }
    }
    val[c] = v;
    if constexpr (WithDerivs) {
      (*dth)[c] = vth / grid_.d_theta;
      (*dph)[c] = vph / grid_.d_phi;
    }
  }
}

Vec3 SurfaceSampler::value(double theta, double phi) const {
  Vec3 v;
  sample<false>(theta, phi, v, nullptr, nullptr);
  return v;
}

void SurfaceSampler::value_and_jacobian(double theta, double phi, Vec3& val,
                                        Vec3& d_theta, Vec3& d_phi) const {
  sample<true>(theta, phi, val, &d_theta, &d_phi);
}

Field3 resample(const SphericalGrid& grid, const Field3& f,
                const SphereMap& map) {
  if (map.gamma.rows() != grid.points())
    throw ValidationError("resample: map size mismatch");
  // Identity maps return the input bit-identically.
  if (map.gamma == unit_sphere(grid)) return f;
  SurfaceSampler sampler(grid, f);
  Field3 out(grid.points(), 3);
  for (int p = 0; p < grid.points(); ++p) {
    double th, ph;
    unit_to_angles(map.gamma.row(p).transpose(), th, ph);
    out.row(p) = sampler.value(th, ph).transpose();
  }
  return out;
}

SphereMap compose(const SphericalGrid& grid, const SphereMap& gamma_a,
                  const SphereMap& gamma_b) {
  SphereMap out;
  out.gamma = resample(grid, gamma_a.gamma, gamma_b);
  for (int p = 0; p < grid.points(); ++p) {
    double n = out.gamma.row(p).norm();
    if (n < 0.5)
      throw ValidationError("compose: interpolated map left the sphere");
    out.gamma.row(p) /= n;
  }
  return out;
}

SphereMap invert_map(const SphericalGrid& grid, const SphereMap& gamma,
                     int iterations) {
  SurfaceSampler sampler(grid, gamma.gamma);
  const Field3 id = unit_sphere(grid);
  SphereMap inv;
  inv.gamma = id;
  for (int it = 0; it < iterations; ++it) {
    for (int p = 0; p < grid.points(); ++p) {
      Vec3 x = inv.gamma.row(p).transpose();
      double th, ph;
      unit_to_angles(x, th, ph);
      Vec3 image = sampler.value(th, ph);
      image /= image.norm();
      Vec3 next = x - (image - id.row(p).transpose());
      inv.gamma.row(p) = (next / next.norm()).transpose();
    }
  }
  return inv;
}

}  // namespace surfelastic
