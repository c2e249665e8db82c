#pragma once

#include <random>

#include "surfelastic/differential.hpp"
#include "surfelastic/grid.hpp"
#include "surfelastic/harmonics.hpp"

namespace surfelastic::testing {

/// Deterministic RNG for tests.
inline std::mt19937& rng(unsigned seed = 0) {
  static thread_local std::mt19937 gen(12345);
  if (seed != 0) gen.seed(seed);
  return gen;
}

inline Eigen::VectorXd random_vector(int n, double scale, std::mt19937& gen) {
  std::normal_distribution<double> dist(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

/// Random smooth immersed surface: unit sphere plus a small random
/// combination of basis harmonics.
inline Field3 random_surface(const SphericalGrid& grid,
                             const HarmonicBasis& basis, double amp,
                             std::mt19937& gen) {
  Field3 f = unit_sphere(grid);
  Eigen::VectorXd c =
      random_vector(basis.count(), amp / std::sqrt(double(basis.count())), gen);
  basis.accumulate(c, f);
  return f;
}

/// Random smooth tangent field from the same basis.
inline Field3 random_tangent(const SphericalGrid& grid,
                             const HarmonicBasis& basis, double amp,
                             std::mt19937& gen) {
  Field3 u = Field3::Zero(grid.points(), 3);
  Eigen::VectorXd c =
      random_vector(basis.count(), amp / std::sqrt(double(basis.count())), gen);
  basis.accumulate(c, u);
  return u;
}

/// Raw random one-form (unconstrained 3x2 per point).
inline OneForm random_form(const SphericalGrid& grid, double scale,
                           std::mt19937& gen) {
  OneForm f;
  std::normal_distribution<double> dist(0.0, scale);
  f.m.resize(grid.points(), 6);
  for (int p = 0; p < grid.points(); ++p)
    for (int c = 0; c < 6; ++c) f.m(p, c) = dist(gen);
  return f;
}

}  // namespace surfelastic::testing
