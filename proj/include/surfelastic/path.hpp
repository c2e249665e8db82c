#pragma once

#include <vector>

#include "surfelastic/harmonics.hpp"
#include "surfelastic/metric.hpp"

namespace surfelastic {

enum class DerivativeMode { kForward, kCentral };

/// Discrete path of surfaces: T+1 nodes at t_i = i/T. Interior nodes are
/// the linear blend of the endpoints plus a harmonic perturbation,
/// f(t_i) = (1-t_i) f1 + t_i f2 + sum_j Coeff(j,i-1) S_j; the endpoints
/// are never altered by Coeff.
struct DiscretePath {
  int T = 0;
  std::vector<Field3> f;   // T+1 surfaces
  Eigen::MatrixXd coeff;   // L x (T-1); empty columns mean zero

  double dt() const { return 1.0 / T; }
};

/// Coeff = 0 path (straight blend between the endpoints).
DiscretePath linear_path(const SphericalGrid& grid, const Field3& f1,
                         const Field3& f2, int T);

/// Path with interior perturbations from the basis (reconstruction
/// identity of the DiscretePath type).
DiscretePath path_from_coeff(const SphericalGrid& grid,
                             const HarmonicBasis& basis, const Field3& f1,
                             const Field3& f2, int T,
                             const Eigen::MatrixXd& coeff);

/// Discrete velocity. Forward mode: (f(t_i) - f(t_{i-1}))/dT for
/// i = 1..T. Central mode: centered differences at interior nodes,
/// one-sided at the ends, for i = 0..T.
Field3 velocity(const DiscretePath& path, int i,
                DerivativeMode mode = DerivativeMode::kForward);

/// Discrete path energy sum ||f_t||^2 dT under the split metric.
/// Throws RankDeficiencyError naming the failing time step.
double path_energy(const MetricWeights& w, const SphericalGrid& grid,
                   const DiscretePath& path,
                   DerivativeMode mode = DerivativeMode::kForward);

/// Discrete path length sum ||f_t|| dT.
double path_length(const MetricWeights& w, const SphericalGrid& grid,
                   const DiscretePath& path,
                   DerivativeMode mode = DerivativeMode::kForward);

/// Length of the SRNF image of the path in L^2: sum |q(f_i) - q(f_{i-1})|.
double srnf_path_length(const SphericalGrid& grid, const DiscretePath& path);

}  // namespace surfelastic
