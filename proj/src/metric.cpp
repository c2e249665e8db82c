#include "surfelastic/metric.hpp"

#include <cmath>

namespace surfelastic {

namespace {

struct PointGeometry {
  Mat2 lam;
  double phi;  // sqrt(det(g))
};

PointGeometry point_geometry(const Mat32& alpha) {
  Mat2 g = alpha.transpose() * alpha;
  double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  PointGeometry pg;
  pg.phi = std::sqrt(det);
  pg.lam << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  pg.lam /= det;
  return pg;
}

double point_inner(const PointGeometry& pg, const Mat32& x, const Mat32& y) {
  return (x * pg.lam * y.transpose()).trace() * pg.phi;
}

}  // namespace

PointSplit decompose_point(const Mat32& alpha, const Mat32& xi) {
  PointGeometry pg = point_geometry(alpha);
  Mat2 b = alpha.transpose() * xi;
  Mat2 lb = pg.lam * b;
  double tau = lb.trace();

  PointSplit out;
  out.scale = 0.5 * tau * alpha;
  Mat32 sym = 0.5 * alpha * pg.lam * (b + b.transpose());
  out.m = sym - out.scale;
  out.zero = 0.5 * alpha * pg.lam * (b - b.transpose());
  out.perp = xi - alpha * (pg.lam * b);
  return out;
}

SplitTangent decompose(const SphericalGrid& grid, const OneForm& alpha,
                       const OneForm& xi) {
  require_full_rank(grid, alpha, "decompose");
  const int n = grid.points();
  SplitTangent st;
  st.xi_m.m.resize(n, 6);
  st.xi_scale.m.resize(n, 6);
  st.xi_perp.m.resize(n, 6);
  st.xi_0.m.resize(n, 6);
  for (int p = 0; p < n; ++p) {
    PointSplit ps = decompose_point(alpha.at(p), xi.at(p));
    st.xi_m.set(p, ps.m);
    st.xi_scale.set(p, ps.scale);
    st.xi_perp.set(p, ps.perp);
    st.xi_0.set(p, ps.zero);
  }
  return st;
}

double base_metric(const SphericalGrid& grid, const OneForm& alpha,
                   const OneForm& xi, const OneForm& eta) {
  if (alpha.points() != grid.points() || xi.points() != grid.points() ||
      eta.points() != grid.points())
    throw ValidationError("base_metric: fields must share the grid");
  require_full_rank(grid, alpha, "base_metric");
  double sum = 0.0;
  for (int i = 0; i < grid.n_phi; ++i) {
    double row = 0.0;
    for (int j = 0; j < grid.n_theta; ++j) {
      const int p = grid.index(i, j);
      PointGeometry pg = point_geometry(alpha.at(p));
      row += point_inner(pg, xi.at(p), eta.at(p));
    }
    sum += row * grid.row_weight[i];
  }
  return sum;
}

double split_metric(const MetricWeights& w, const SphericalGrid& grid,
                    const OneForm& alpha, const OneForm& xi,
                    const OneForm& eta) {
  w.validate();
  if (alpha.points() != grid.points() || xi.points() != grid.points() ||
      eta.points() != grid.points())
    throw ValidationError("split_metric: fields must share the grid");
  require_full_rank(grid, alpha, "split_metric");
  double sum = 0.0;
  for (int i = 0; i < grid.n_phi; ++i) {
    double row = 0.0;
    for (int j = 0; j < grid.n_theta; ++j) {
      const int p = grid.index(i, j);
      const Mat32 a = alpha.at(p);
      PointGeometry pg = point_geometry(a);
      PointSplit px = decompose_point(a, xi.at(p));
      PointSplit pe = decompose_point(a, eta.at(p));
      row += w.a * point_inner(pg, px.m, pe.m) +
             w.b * point_inner(pg, px.scale, pe.scale) +
             w.c * point_inner(pg, px.perp, pe.perp) +
             w.d * point_inner(pg, px.zero, pe.zero);
    }
    sum += row * grid.row_weight[i];
  }
  return sum;
}

double pullback_norm_squared(const MetricWeights& w, const SphericalGrid& grid,
                             const Field3& f, const Field3& u) {
  w.validate();
  OneForm alpha = differential(grid, f);
  require_full_rank(grid, alpha, "pullback_norm");
  OneForm xi = differential(grid, u);
  double sum = 0.0;
  for (int i = 0; i < grid.n_phi; ++i) {
    double row = 0.0;
    for (int j = 0; j < grid.n_theta; ++j) {
      const int p = grid.index(i, j);
      row += split_kernel<double>(w, alpha.at(p), xi.at(p));
    }
    sum += row * grid.row_weight[i];
  }
  return sum;
}

double pullback_norm(const MetricWeights& w, const SphericalGrid& grid,
                     const Field3& f, const Field3& u) {
  return std::sqrt(std::max(0.0, pullback_norm_squared(w, grid, f, u)));
}

}  // namespace surfelastic
