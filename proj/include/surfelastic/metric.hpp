#pragma once

#include "surfelastic/differential.hpp"

namespace surfelastic {

/// Orthogonal split of a tangent one-form at a full-rank base point:
/// xi = xi_m + (1/2)tr(alpha^+ xi) alpha + xi_perp + xi_0
/// (shear, scale, bend, local reparametrization).
struct SplitTangent {
  OneForm xi_m;
  OneForm xi_scale;
  OneForm xi_perp;
  OneForm xi_0;
};

/// Pointwise split of a 3x2 tangent at a full-rank 3x2 base.
struct PointSplit {
  Mat32 m, scale, perp, zero;
};
PointSplit decompose_point(const Mat32& alpha, const Mat32& xi);

SplitTangent decompose(const SphericalGrid& grid, const OneForm& alpha,
                       const OneForm& xi);

/// Base metric G_alpha(xi, eta) = int tr(xi (a^T a)^-1 eta^T) sqrt(det a^T a).
double base_metric(const SphericalGrid& grid, const OneForm& alpha,
                   const OneForm& xi, const OneForm& eta);

/// Split metric: decomposes both arguments and sums the weighted part-wise
/// base inner products, so bilinearity is exact.
double split_metric(const MetricWeights& w, const SphericalGrid& grid,
                    const OneForm& alpha, const OneForm& xi,
                    const OneForm& eta);

/// Pointwise split-metric integrand for the quadratic form (eta = xi),
/// before multiplication by the quadrature weight. Templated so it can be
/// evaluated on jets for derivatives. All 2x2 algebra; no rank checks.
template <typename T>
T split_kernel(const MetricWeights& w, const Eigen::Matrix<T, 3, 2>& alpha,
               const Eigen::Matrix<T, 3, 2>& xi) {
  using M2 = Eigen::Matrix<T, 2, 2>;
  const M2 g = alpha.transpose() * alpha;
  const T det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const T phi = sqrt(det);
  M2 lam;
  lam << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  lam /= det;

  const M2 b = alpha.transpose() * xi;     // 2x2
  const M2 lb = lam * b;
  const T tau = lb(0, 0) + lb(1, 1);       // tr(alpha^+ xi)

  // Scale part: |(1/2) tau alpha|^2 = tau^2 / 2 (times phi).
  const T term_scale = T(0.5) * tau * tau;

  // Symmetric / antisymmetric 2x2 coordinates S = (B+B^T)/2, K = (B-B^T)/2.
  const M2 s = T(0.5) * (b + b.transpose());
  const M2 sm = s - (T(0.5) * tau) * g;            // trace-free shear block
  const M2 lsm = lam * sm;
  const T term_m = (lsm * lsm).trace();

  const T k01 = T(0.5) * (b(0, 1) - b(1, 0));
  M2 kk;
  kk << T(0), k01, -k01, T(0);
  const M2 lk = lam * kk;
  const T term_0 = -(lk * lk).trace();

  // Perp part: tr(xi lam xi^T) - tr(lam B lam B^T).
  const T full = (xi * lam * xi.transpose()).trace();
  const T term_perp = full - (lam * b * lam * b.transpose()).trace();

  return (T(w.a) * term_m + T(w.b) * term_scale + T(w.c) * term_perp +
          T(w.d) * term_0) *
         phi;
}

/// ||u||_f = sqrt(G_{df}(du, du)) with the given weights; throws
/// RankDeficiencyError naming grid indices when df loses rank.
double pullback_norm(const MetricWeights& w, const SphericalGrid& grid,
                     const Field3& f, const Field3& u);

/// Squared pullback norm (the quantity summed by the path energies).
double pullback_norm_squared(const MetricWeights& w, const SphericalGrid& grid,
                             const Field3& f, const Field3& u);

}  // namespace surfelastic
