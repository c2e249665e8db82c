#pragma once

#include "surfelastic/diffeo.hpp"
#include "surfelastic/path.hpp"
#include "surfelastic/rotation.hpp"

namespace surfelastic {

struct EnergyOptions {
  DerivativeMode mode = DerivativeMode::kForward;
  /// Interior blend from f_bar∘gamma instead of the original f1 (the
  /// paper's equations use the original f1; this is the config switch).
  bool interior_from_fbar = false;
};

/// Which blocks of variables the functional exposes, packed in the order
/// [xv | vec(Coeff) column-major | rot].
struct EnergyVariables {
  bool gamma = false;
  bool rotation = false;
  bool coeff = false;
};

/// Discrete path energy as a differentiable function of the
/// reparametrization coefficients X^v, the interior perturbation matrix
/// Coeff, and the target rotation. Covers all four functionals:
///   F      (coeff)                 - parametrized matching
///   Fbar   (gamma + coeff)         - unparametrized matching
///   F_r    (gamma, T = 1)          - reparametrization update
///   Ftilde (gamma + coeff + rot)   - modulo rigid motions
/// The path is
///   f(t_0) = f_bar ∘ gamma,  f(t_T) = R f_end,
///   f(t_i) = (1-t_i) f_int + t_i (R f_end) + sum_j Coeff(j,i) S_j,
/// where f_int is f_interior (default) or f_bar∘gamma.
class PathEnergyModel {
 public:
  PathEnergyModel(MetricWeights w, const SphericalGrid& grid,
                  const HarmonicBasis* sbasis, const VectorFieldBasis* vbasis,
                  Field3 f_bar, Field3 f_interior, Field3 f_end, int T,
                  EnergyOptions opts, EnergyVariables vars);

  int dimension() const;
  int coeff_rows() const;
  int coeff_cols() const { return T_ - 1; }

  double value(const Eigen::VectorXd& x) const;
  double value_and_gradient(const Eigen::VectorXd& x,
                            Eigen::VectorXd& grad) const;

  /// Builds the discrete path at the given packed variables.
  DiscretePath path_at(const Eigen::VectorXd& x) const;

  /// Views into a packed vector.
  Eigen::VectorXd xv_of(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd coeff_of(const Eigen::VectorXd& x) const;
  Vec3 rot_of(const Eigen::VectorXd& x) const;
  Eigen::VectorXd pack(const Eigen::VectorXd& xv, const Eigen::MatrixXd& coeff,
                       const Vec3& rot) const;

  const EnergyVariables& variables() const { return vars_; }
  const EnergyOptions& options() const { return opts_; }

 private:
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;

  MetricWeights w_;
  const SphericalGrid& grid_;
  const HarmonicBasis* sbasis_;
  const VectorFieldBasis* vbasis_;
  Field3 f_bar_, f_interior_, f_end_;
  int T_;
  EnergyOptions opts_;
  EnergyVariables vars_;
  int n_xv_ = 0, n_coeff_ = 0, n_rot_ = 0;
};

/// Module-level energy operations (value path, with precondition checks).

double energy_unparametrized(const MetricWeights& w, const SphericalGrid& grid,
                             const HarmonicBasis& sbasis,
                             const DiffeoCoefficients& coeffs,
                             const Field3& f1, const Field3& f2,
                             const Eigen::MatrixXd& coeff, int T,
                             EnergyOptions opts = {});

double reparam_functional(const MetricWeights& w, const SphericalGrid& grid,
                          const DiffeoCoefficients& coeffs,
                          const Field3& f_bar, const Field3& f_next);

double energy_rigid(const MetricWeights& w, const SphericalGrid& grid,
                    const HarmonicBasis& sbasis,
                    const DiffeoCoefficients& coeffs, const Field3& f1,
                    const Field3& f2, const Eigen::MatrixXd& coeff,
                    const RotationParams& rot, int T, EnergyOptions opts = {});

}  // namespace surfelastic
