#include "surfelastic/path.hpp"

#include "surfelastic/srnf.hpp"

#include <cmath>

namespace surfelastic {

DiscretePath linear_path(const SphericalGrid& grid, const Field3& f1,
                         const Field3& f2, int T) {
  if (T < 2) throw ValidationError("linear_path: T must be at least 2");
  if (f1.rows() != grid.points() || f2.rows() != grid.points())
    throw ValidationError("linear_path: surfaces must share the grid");
  DiscretePath p;
  p.T = T;
  p.f.resize(T + 1);
  for (int i = 0; i <= T; ++i) {
    double t = double(i) / T;
    p.f[i] = (1.0 - t) * f1 + t * f2;
  }
  return p;
}

DiscretePath path_from_coeff(const SphericalGrid& grid,
                             const HarmonicBasis& basis, const Field3& f1,
                             const Field3& f2, int T,
                             const Eigen::MatrixXd& coeff) {
  DiscretePath p = linear_path(grid, f1, f2, T);
  if (coeff.size() == 0) return p;
  if (coeff.rows() != basis.count() || coeff.cols() != T - 1)
    throw ValidationError("path_from_coeff: Coeff must be L x (T-1)");
  p.coeff = coeff;
  for (int i = 1; i < T; ++i) basis.accumulate(coeff.col(i - 1), p.f[i]);
  return p;
}

Field3 velocity(const DiscretePath& path, int i, DerivativeMode mode) {
  const double dt = path.dt();
  if (mode == DerivativeMode::kForward) {
    if (i < 1 || i > path.T)
      throw ValidationError("velocity: index must be in 1..T");
    return (path.f[i] - path.f[i - 1]) / dt;
  }
  if (i < 0 || i > path.T)
    throw ValidationError("velocity: index must be in 0..T");
  if (i == 0) return (path.f[1] - path.f[0]) / dt;
  if (i == path.T) return (path.f[path.T] - path.f[path.T - 1]) / dt;
  return (path.f[i + 1] - path.f[i - 1]) / (2.0 * dt);
}

namespace {

template <typename Step>
void for_each_energy_term(const DiscretePath& path, DerivativeMode mode,
                          Step&& step) {
  // step(base_index, velocity, quadrature_factor)
  if (mode == DerivativeMode::kForward) {
    for (int i = 1; i <= path.T; ++i)
      step(i - 1, velocity(path, i, mode), 1.0);
  } else {
    for (int i = 0; i <= path.T; ++i) {
      double wq = (i == 0 || i == path.T) ? 0.5 : 1.0;
      step(i, velocity(path, i, mode), wq);
    }
  }
}

}  // namespace

double path_energy(const MetricWeights& w, const SphericalGrid& grid,
                   const DiscretePath& path, DerivativeMode mode) {
  w.validate();
  double total = 0.0;
  for_each_energy_term(path, mode, [&](int base, const Field3& vel,
                                       double wq) {
    double term;
    try {
      term = pullback_norm_squared(w, grid, path.f[base], vel);
    } catch (const RankDeficiencyError& e) {
      throw RankDeficiencyError("path_energy at time step " +
                                    std::to_string(base) + ": " + e.what(),
                                e.phi_row, e.theta_col);
    }
    total += wq * term * path.dt();
  });
  return total;
}

double path_length(const MetricWeights& w, const SphericalGrid& grid,
                   const DiscretePath& path, DerivativeMode mode) {
  w.validate();
  double total = 0.0;
  for_each_energy_term(path, mode, [&](int base, const Field3& vel,
                                       double wq) {
    total += wq *
             std::sqrt(std::max(
                 0.0, pullback_norm_squared(w, grid, path.f[base], vel))) *
             path.dt();
  });
  return total;
}

double srnf_path_length(const SphericalGrid& grid, const DiscretePath& path) {
  double total = 0.0;
  Field3 prev = srnf(grid, path.f[0]);
  for (int i = 1; i <= path.T; ++i) {
    Field3 next = srnf(grid, path.f[i]);
    total += srnf_l2_distance(grid, prev, next);
    prev = std::move(next);
  }
  return total;
}

}  // namespace surfelastic
