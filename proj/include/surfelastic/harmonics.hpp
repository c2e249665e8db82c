#pragma once

#include "surfelastic/grid.hpp"

namespace surfelastic {

/// Real spherical harmonics of degree 1..deg evaluated on a grid, ordered
/// degree-major, order-minor (m = -l..l). Index of harmonic (l, m) is
/// l*l - 1 + (m + l). The degree-0 constant is excluded. The ordering is
/// frozen so coefficient matrices stay portable across runs.
struct HarmonicTable {
  int deg = 0;
  int count = 0;              // (deg+1)^2 - 1
  Eigen::MatrixXd y;          // points x count
  Eigen::MatrixXd y_phi;      // d/dphi
  Eigen::MatrixXd y_theta;    // d/dtheta (not divided by sin phi)
  std::vector<int> l_of;      // degree per column
  std::vector<int> m_of;      // signed order per column
};

HarmonicTable harmonic_table(const SphericalGrid& grid, int deg);

/// Number of harmonics of degree 1..deg.
inline int harmonic_count(int deg) { return (deg + 1) * (deg + 1) - 1; }

/// Basis of the surface-perturbation space: each element places one real
/// spherical harmonic into one coordinate slot. Count L = 3((deg+1)^2-1).
/// Element j uses harmonic j/3 and slot j%3 (slot is the innermost index).
struct HarmonicBasis {
  int deg = 0;
  HarmonicTable table;
  int count() const { return 3 * table.count; }
  int harmonic_of(int j) const { return j / 3; }
  int slot_of(int j) const { return j % 3; }

  /// Dense field of element j (a column of table.y in one slot).
  Field3 element(const SphericalGrid& grid, int j) const;

  /// f_out = sum_j coeff[j] * S_j added onto `accum`. coeff has length L.
  void accumulate(const Eigen::VectorXd& coeff, Field3& accum) const;

  /// Adjoint of accumulate: projects a cotangent field onto the basis,
  /// out[j] = sum_p <cot[p], S_j[p]> (plain entrywise sum).
  Eigen::VectorXd project(const Field3& cotangent) const;
};

HarmonicBasis surface_basis(const SphericalGrid& grid, int deg);

/// Tangent vector fields on S^2: gradients and skew-gradients of the real
/// spherical harmonics, discretely L^2-normalized. Count
/// Lbar = 2((deg_bar+1)^2 - 1). Element 2h is grad(Y_h), element 2h+1 is
/// the skew gradient n x grad(Y_h). Components are stored in the frame
/// {e2, e3} together with the analytic entries of the covariant gradient
/// nabla(v) = [[a, b], [c, d]]:
///   a = u_phi, b = v_phi, c = (u_theta - v cos phi)/sin phi,
///   d = (v_theta + u cos phi)/sin phi.
struct VectorFieldBasis {
  int deg_bar = 0;
  int count = 0;
  const SphericalGrid* grid = nullptr;
  Eigen::MatrixXd u;  // points x count, e2 components
  Eigen::MatrixXd v;  // points x count, e3 components
  Eigen::MatrixXd ga, gb, gc, gd;  // covariant gradient entries
  Eigen::VectorXd raw_norm;        // discrete L2 norms before normalization
};

VectorFieldBasis vectorfield_basis(const SphericalGrid& grid, int deg_bar);

inline int vectorfield_count(int deg_bar) {
  return 2 * (deg_bar + 1) * (deg_bar + 1) - 2;
}

/// A tangent vector field assembled from basis coefficients, with its
/// analytic covariant gradient.
struct TangentField {
  ScalarField u, v;            // e2 / e3 components
  ScalarField a, b, c, d;      // nabla U entries
};

TangentField assemble_field(const VectorFieldBasis& basis,
                            const Eigen::VectorXd& xv);

}  // namespace surfelastic
