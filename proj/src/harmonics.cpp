#include "surfelastic/harmonics.hpp"

#include <cmath>
#include <numbers>

namespace surfelastic {

namespace {

// Fully normalized associated Legendre profiles at one colatitude:
// pl[idx(l,m)] = N_l^m P_l^m(cos phi) with int_0^pi pl^2 sin = 1/(2pi),
// Condon-Shortley phase omitted. dpl holds d/dphi.
struct LegendreProfiles {
  int deg;
  std::vector<double> pl, dpl;
  int idx(int l, int m) const { return l * (l + 1) / 2 + m; }
};

LegendreProfiles legendre_profiles(int deg, double sp, double cp) {
  LegendreProfiles out;
  out.deg = deg;
  const int n = (deg + 1) * (deg + 2) / 2;
  out.pl.assign(n, 0.0);
  out.dpl.assign(n, 0.0);
  auto& pl = out.pl;
  const double inv_sp = 1.0 / sp;

  pl[out.idx(0, 0)] = std::sqrt(1.0 / (4.0 * std::numbers::pi));
  for (int m = 1; m <= deg; ++m)
    pl[out.idx(m, m)] =
        std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sp * pl[out.idx(m - 1, m - 1)];
  for (int m = 0; m < deg; ++m)
    pl[out.idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * cp * pl[out.idx(m, m)];
  for (int m = 0; m <= deg; ++m) {
    for (int l = m + 2; l <= deg; ++l) {
      double al = std::sqrt((4.0 * l * l - 1.0) /
                            (static_cast<double>(l) * l - static_cast<double>(m) * m));
      double al1 = std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) /
                             ((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m));
      pl[out.idx(l, m)] = al * (cp * pl[out.idx(l - 1, m)] -
                                pl[out.idx(l - 2, m)] / al1);
    }
  }
  // d/dphi P^_l^m = (l cos phi P^_l^m - r_l^m P^_{l-1}^m) / sin phi,
  // r_l^m = sqrt((l^2-m^2)(2l+1)/(2l-1)).
  for (int m = 0; m <= deg; ++m) {
    for (int l = m; l <= deg; ++l) {
      double below = (l - 1 >= m) ? pl[out.idx(l - 1, m)] : 0.0;
      double r = std::sqrt((static_cast<double>(l) * l - static_cast<double>(m) * m) *
                           (2.0 * l + 1.0) / (2.0 * l - 1.0));
      out.dpl[out.idx(l, m)] = (l * cp * pl[out.idx(l, m)] - r * below) * inv_sp;
    }
  }
  return out;
}

}  // namespace

HarmonicTable harmonic_table(const SphericalGrid& grid, int deg) {
  if (deg < 1) throw ValidationError("harmonic_table: deg must be >= 1");
  HarmonicTable t;
  t.deg = deg;
  t.count = harmonic_count(deg);
  const int P = grid.points();
  t.y.resize(P, t.count);
  t.y_phi.resize(P, t.count);
  t.y_theta.resize(P, t.count);
  t.l_of.resize(t.count);
  t.m_of.resize(t.count);
  for (int l = 1; l <= deg; ++l)
    for (int m = -l; m <= l; ++m) {
      int h = l * l - 1 + (m + l);
      t.l_of[h] = l;
      t.m_of[h] = m;
    }

  const double sqrt2 = std::numbers::sqrt2;
  for (int i = 0; i < grid.n_phi; ++i) {
    LegendreProfiles prof = legendre_profiles(deg, grid.sin_phi[i], grid.cos_phi[i]);
    for (int j = 0; j < grid.n_theta; ++j) {
      const int p = grid.index(i, j);
      const double th = grid.theta[j];
      for (int l = 1; l <= deg; ++l) {
        for (int m = -l; m <= l; ++m) {
          const int h = l * l - 1 + (m + l);
          const double a = prof.pl[prof.idx(l, std::abs(m))];
          const double da = prof.dpl[prof.idx(l, std::abs(m))];
          double trig, dtrig;  // T(theta) and T'(theta)
          if (m == 0) {
            trig = 1.0;
            dtrig = 0.0;
          } else if (m > 0) {
            trig = sqrt2 * std::cos(m * th);
            dtrig = -m * sqrt2 * std::sin(m * th);
          } else {
            trig = sqrt2 * std::sin(-m * th);
            dtrig = -m * sqrt2 * std::cos(-m * th);
          }
          t.y(p, h) = a * trig;
          t.y_phi(p, h) = da * trig;
          t.y_theta(p, h) = a * dtrig;
        }
      }
    }
  }
  return t;
}

Field3 HarmonicBasis::element(const SphericalGrid& grid, int j) const {
  Field3 f = Field3::Zero(grid.points(), 3);
  f.col(slot_of(j)) = table.y.col(harmonic_of(j));
  return f;
}

void HarmonicBasis::accumulate(const Eigen::VectorXd& coeff,
                               Field3& accum) const {
  const int H = table.count;
  Eigen::VectorXd per_slot(H);
  for (int s = 0; s < 3; ++s) {
    for (int h = 0; h < H; ++h) per_slot[h] = coeff[3 * h + s];
    accum.col(s).noalias() += table.y * per_slot;
  }
}

Eigen::VectorXd HarmonicBasis::project(const Field3& cotangent) const {
  const int H = table.count;
  Eigen::VectorXd out(3 * H);
  for (int s = 0; s < 3; ++s) {
    Eigen::VectorXd per_slot = table.y.transpose() * cotangent.col(s);
    for (int h = 0; h < H; ++h) out[3 * h + s] = per_slot[h];
  }
  return out;
}

HarmonicBasis surface_basis(const SphericalGrid& grid, int deg) {
  if (deg < 1) throw ValidationError("surface_basis: deg must be >= 1");
  HarmonicBasis b;
  b.deg = deg;
  b.table = harmonic_table(grid, deg);
  return b;
}

VectorFieldBasis vectorfield_basis(const SphericalGrid& grid, int deg_bar) {
  if (deg_bar < 1)
    throw ValidationError("vectorfield_basis: deg_bar must be >= 1");
  HarmonicTable t = harmonic_table(grid, deg_bar);
  const int H = t.count;
  const int P = grid.points();

  VectorFieldBasis b;
  b.deg_bar = deg_bar;
  b.count = 2 * H;
  b.grid = &grid;
  b.u.resize(P, b.count);
  b.v.resize(P, b.count);
  b.ga.resize(P, b.count);
  b.gb.resize(P, b.count);
  b.gc.resize(P, b.count);
  b.gd.resize(P, b.count);
  b.raw_norm.resize(b.count);

  // Per-point 1/sin(phi), cos(phi), cot(phi) and quadrature weight.
  Eigen::VectorXd inv_s(P), cosv(P), cot(P), w(P);
  for (int i = 0; i < grid.n_phi; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      int p = grid.index(i, j);
      inv_s[p] = 1.0 / grid.sin_phi[i];
      cosv[p] = grid.cos_phi[i];
      cot[p] = grid.cos_phi[i] / grid.sin_phi[i];
      w[p] = grid.row_weight[i];
    }

  for (int h = 0; h < H; ++h) {
    const int l = t.l_of[h];
    const int m = t.m_of[h];
    const int partner = h - 2 * m;  // index of (l, -m)
    const double m2 = static_cast<double>(m) * m;
    // grad Y in the {e2, e3} frame.
    Eigen::VectorXd ug = t.y_phi.col(h);
    Eigen::VectorXd vg = t.y_theta.col(h).cwiseProduct(inv_s);
    // Second derivatives: Yphiphi from the Laplace-Beltrami identity
    // (Ythetatheta = -m^2 Y), Yphitheta from the (l,-m) partner column.
    Eigen::VectorXd yphiphi =
        (-static_cast<double>(l) * (l + 1)) * t.y.col(h) +
        m2 * t.y.col(h).cwiseProduct(inv_s).cwiseProduct(inv_s) -
        cot.cwiseProduct(t.y_phi.col(h));
    Eigen::VectorXd yphitheta =
        (-static_cast<double>(m)) * t.y_phi.col(partner);
    Eigen::VectorXd ag = yphiphi;
    Eigen::VectorXd bg = yphitheta.cwiseProduct(inv_s) - vg.cwiseProduct(cot);
    Eigen::VectorXd cg = bg;  // Hessian of Y is symmetric
    Eigen::VectorXd dg =
        ((-m2) * t.y.col(h).cwiseProduct(inv_s) +
         t.y_phi.col(h).cwiseProduct(cosv))
            .cwiseProduct(inv_s);

    const int kg = 2 * h;      // gradient element
    const int ks = 2 * h + 1;  // skew-gradient element
    b.u.col(kg) = ug;
    b.v.col(kg) = vg;
    b.ga.col(kg) = ag;
    b.gb.col(kg) = bg;
    b.gc.col(kg) = cg;
    b.gd.col(kg) = dg;
    // skew gradient: (u,v) -> (-v, u); nabla entries permute accordingly.
    b.u.col(ks) = -vg;
    b.v.col(ks) = ug;
    b.ga.col(ks) = -bg;
    b.gb.col(ks) = ag;
    b.gc.col(ks) = -dg;
    b.gd.col(ks) = cg;
  }

  for (int k = 0; k < b.count; ++k) {
    double n2 = (b.u.col(k).cwiseAbs2() + b.v.col(k).cwiseAbs2()).dot(w);
    double n = std::sqrt(n2);
    b.raw_norm[k] = n;
    double s = 1.0 / n;
    b.u.col(k) *= s;
    b.v.col(k) *= s;
    b.ga.col(k) *= s;
    b.gb.col(k) *= s;
    b.gc.col(k) *= s;
    b.gd.col(k) *= s;
  }
  return b;
}

TangentField assemble_field(const VectorFieldBasis& basis,
                            const Eigen::VectorXd& xv) {
  if (xv.size() != basis.count)
    throw ValidationError("assemble_field: coefficient length mismatch");
  TangentField f;
  f.u = basis.u * xv;
  f.v = basis.v * xv;
  f.a = basis.ga * xv;
  f.b = basis.gb * xv;
  f.c = basis.gc * xv;
  f.d = basis.gd * xv;
  return f;
}

}  // namespace surfelastic
