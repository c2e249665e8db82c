#include "surfelastic/grid.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace surfelastic {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec3 SphericalGrid::e1(int i, int j) const {
  return {sin_phi[i] * std::cos(theta[j]), sin_phi[i] * std::sin(theta[j]),
          cos_phi[i]};
}

Vec3 SphericalGrid::e2(int i, int j) const {
  return {cos_phi[i] * std::cos(theta[j]), cos_phi[i] * std::sin(theta[j]),
          -sin_phi[i]};
}

Vec3 SphericalGrid::e3(int /*i*/, int j) const {
  return {-std::sin(theta[j]), std::cos(theta[j]), 0.0};
}

SphericalGrid build_grid(int n_theta, int n_phi) {
  if (n_theta < 4)
    throw ValidationError("build_grid: n_theta must be at least 4, got " +
                          std::to_string(n_theta));
  if (n_phi < 3)
    throw ValidationError("build_grid: n_phi must be at least 3, got " +
                          std::to_string(n_phi));
  SphericalGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.d_theta = 2.0 * kPi / n_theta;
  g.d_phi = kPi / n_phi;
  g.theta.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) g.theta[j] = j * g.d_theta;
  g.phi.resize(n_phi);
  g.sin_phi.resize(n_phi);
  g.cos_phi.resize(n_phi);
  g.row_weight.resize(n_phi);
  for (int i = 0; i < n_phi; ++i) {
    g.phi[i] = (i + 0.5) * g.d_phi;
    g.sin_phi[i] = std::sin(g.phi[i]);
    g.cos_phi[i] = std::cos(g.phi[i]);
    g.row_weight[i] = g.sin_phi[i] * g.d_theta * g.d_phi;
  }
  return g;
}

double integrate(const SphericalGrid& grid, const ScalarField& field) {
  if (field.size() != grid.points())
    throw ValidationError("integrate: field size does not match grid");
  double sum = 0.0;
  for (int i = 0; i < grid.n_phi; ++i) {
    double row = 0.0;
    for (int j = 0; j < grid.n_theta; ++j) row += field[grid.index(i, j)];
    sum += row * grid.row_weight[i];
  }
  return sum;
}

Field3 unit_sphere(const SphericalGrid& grid) {
  Field3 f(grid.points(), 3);
  for (int i = 0; i < grid.n_phi; ++i)
    for (int j = 0; j < grid.n_theta; ++j)
      f.row(grid.index(i, j)) = grid.e1(i, j).transpose();
  return f;
}

double surface_diameter(const Field3& f) {
  Vec3 lo = f.colwise().minCoeff().transpose();
  Vec3 hi = f.colwise().maxCoeff().transpose();
  return (hi - lo).norm();
}

Eigen::VectorXd trig_shift_half_turn(const Eigen::VectorXd& row) {
  const int n = static_cast<int>(row.size());
  Eigen::VectorXd out(n);
  if (n % 2 == 0) {
    for (int j = 0; j < n; ++j) out[j] = row[(j + n / 2) % n];
    return out;
  }
  // Odd n: evaluate the degree-(n-1)/2 trig interpolant at theta_j + pi
  // via the periodic Dirichlet kernel D(x) = sin(nx/2) / (n sin(x/2)).
  static thread_local std::vector<double> kernel;
  static thread_local int kernel_n = -1;
  if (kernel_n != n) {
    kernel.assign(n, 0.0);
    for (int d = 0; d < n; ++d) {
      double x = d * 2.0 * kPi / n + kPi;
      kernel[d] = std::sin(0.5 * n * x) / (n * std::sin(0.5 * x));
    }
    kernel_n = n;
  }
  for (int j = 0; j < n; ++j) {
    double v = 0.0;
    for (int jp = 0; jp < n; ++jp) v += row[jp] * kernel[(j - jp + n) % n];
    out[j] = v;
  }
  return out;
}

namespace {

// Neville interpolation of (x_k, y_k) evaluated at x = 0.
double neville_at_zero(const std::vector<double>& x, std::vector<double> y) {
  const int n = static_cast<int>(x.size());
  for (int k = 1; k < n; ++k)
    for (int i = 0; i + k < n; ++i)
      y[i] = ((0.0 - x[i + k]) * y[i] + x[i] * y[i + 1]) / (x[i] - x[i + k]);
  return y[0];
}

}  // namespace

Field3 reconstruct_pole(const SphericalGrid& grid, const Field3& f,
                        bool north) {
  const int K = std::min(6, grid.n_phi / 2);
  const int nt = grid.n_theta;
  // Row i of the pole-local frame plus its half-turn shifted copy.
  std::vector<Eigen::MatrixXd> rows(K), shifted(K);  // each n_theta x 3
  std::vector<double> dist(K);                       // angular distance to pole
  for (int k = 0; k < K; ++k) {
    int i = north ? k : grid.n_phi - 1 - k;
    dist[k] = north ? grid.phi[i] : (kPi - grid.phi[i]);
    Eigen::MatrixXd r(nt, 3), s(nt, 3);
    for (int j = 0; j < nt; ++j) r.row(j) = f.row(grid.index(i, j));
    for (int c = 0; c < 3; ++c) s.col(c) = trig_shift_half_turn(r.col(c));
    rows[k] = std::move(r);
    shifted[k] = std::move(s);
  }
  Field3 poles(nt, 3);
  std::vector<double> xs(2 * K);
  std::vector<double> ys(2 * K);
  for (int j = 0; j < nt; ++j) {
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < K; ++k) {
        xs[2 * k] = dist[k];
        ys[2 * k] = rows[k](j, c);
        xs[2 * k + 1] = -dist[k];
        ys[2 * k + 1] = shifted[k](j, c);
      }
      poles(j, c) = neville_at_zero(xs, ys);
    }
  }
  return poles;
}

Vec3 pole_point(const SphericalGrid& grid, const Field3& f, bool north) {
  Field3 p = reconstruct_pole(grid, f, north);
  return p.colwise().mean().transpose();
}

namespace {

// Largest Fourier amplitude among the top-band theta modes of one row.
double row_fourier_tail(const Eigen::VectorXd& row, double d_theta) {
  const int n = static_cast<int>(row.size());
  const int m_max = n / 2;
  const int m_lo = std::max(2, static_cast<int>(std::ceil(0.8 * m_max)));
  double worst = 0.0;
  for (int m = m_lo; m <= m_max; ++m) {
    double cr = 0.0, ci = 0.0;
    for (int j = 0; j < n; ++j) {
      cr += row[j] * std::cos(m * j * d_theta);
      ci += row[j] * std::sin(m * j * d_theta);
    }
    double amp = 2.0 * std::hypot(cr, ci) / n;
    worst = std::max(worst, amp);
  }
  return worst;
}

}  // namespace

SurfaceValidation validate_surface(const SphericalGrid& grid,
                                   const Field3& f) {
  if (f.rows() != grid.points())
    throw ValidationError("surface: point count does not match grid");
  if (!f.allFinite()) throw ValidationError("surface: non-finite coordinates");
  const double diam = surface_diameter(f);
  if (diam <= 0.0) throw ValidationError("surface: degenerate (zero diameter)");

  SurfaceValidation v;

  // Seam / periodicity: a non-periodic row leaks energy into the top
  // Fourier band; smooth periodic rows keep it near machine level.
  int worst_row = -1;
  for (int i = 0; i < grid.n_phi; ++i) {
    Eigen::VectorXd row(grid.n_theta);
    double tail = 0.0;
    for (int c = 0; c < 3; ++c) {
      for (int j = 0; j < grid.n_theta; ++j)
        row[j] = f(grid.index(i, j), c);
      tail = std::max(tail, row_fourier_tail(row, grid.d_theta));
    }
    if (tail > v.seam_tail * diam) {
      v.seam_tail = tail / diam;
      worst_row = i;
    }
  }
  if (v.seam_tail > kSeamTailTolPerDiameter) {
    v.bad_row = worst_row;
    throw ValidationError(
        "surface: theta seam/periodicity violation at phi row " +
        std::to_string(worst_row) + " (relative tail amplitude " +
        std::to_string(v.seam_tail) + ")");
  }

  for (bool north : {true, false}) {
    Field3 p = reconstruct_pole(grid, f, north);
    Vec3 mean = p.colwise().mean().transpose();
    double spread = 0.0;
    int worst_col = -1;
    for (int j = 0; j < grid.n_theta; ++j) {
      double dd = (p.row(j).transpose() - mean).norm();
      if (dd > spread) {
        spread = dd;
        worst_col = j;
      }
    }
    double rel = spread / diam;
    (north ? v.pole_spread_north : v.pole_spread_south) = rel;
    if (rel > kPoleTolPerDiameter) {
      v.bad_col = worst_col;
      throw ValidationError(
          std::string("surface: ") + (north ? "north" : "south") +
          " pole inconsistency at theta column " + std::to_string(worst_col) +
          " (relative spread " + std::to_string(rel) + ")");
    }
  }
  return v;
}

}  // namespace surfelastic
