#include "surfelastic/differential.hpp"

#include <cmath>
#include <string>

namespace surfelastic {

OneForm differential(const SphericalGrid& grid, const Field3& f) {
  if (f.rows() != grid.points())
    throw ValidationError("differential: field size does not match grid");
  const int nt = grid.n_theta;
  const int np = grid.n_phi;
  OneForm out;
  out.m.resize(grid.points(), 6);

  const double ct = 1.0 / (2.0 * grid.d_theta);
  const double cp = 1.0 / (2.0 * grid.d_phi);
  for (int i = 0; i < np; ++i) {
    const double cti = ct / grid.sin_phi[i];
    for (int j = 0; j < nt; ++j) {
      const int p = grid.index(i, j);
      const int jp = grid.index(i, (j + 1) % nt);
      const int jm = grid.index(i, (j + nt - 1) % nt);
      for (int c = 0; c < 3; ++c)
        out.m(p, c) = (f(jp, c) - f(jm, c)) * cti;

      double dphi[3];
      if (i == 0) {
        const int p1 = grid.index(1, j), p2 = grid.index(2, j);
        for (int c = 0; c < 3; ++c)
          dphi[c] = (-3.0 * f(p, c) + 4.0 * f(p1, c) - f(p2, c)) * cp;
      } else if (i == np - 1) {
        const int p1 = grid.index(np - 2, j), p2 = grid.index(np - 3, j);
        for (int c = 0; c < 3; ++c)
          dphi[c] = (3.0 * f(p, c) - 4.0 * f(p1, c) + f(p2, c)) * cp;
      } else {
        const int ip = grid.index(i + 1, j), im = grid.index(i - 1, j);
        for (int c = 0; c < 3; ++c) dphi[c] = (f(ip, c) - f(im, c)) * cp;
      }
      for (int c = 0; c < 3; ++c) out.m(p, 3 + c) = dphi[c];
    }
  }
  return out;
}

Field3 differential_adjoint(const SphericalGrid& grid, const OneForm& w) {
  if (w.points() != grid.points())
    throw ValidationError("differential_adjoint: size mismatch");
  const int nt = grid.n_theta;
  const int np = grid.n_phi;
  Field3 out = Field3::Zero(grid.points(), 3);

  const double ct = 1.0 / (2.0 * grid.d_theta);
  const double cp = 1.0 / (2.0 * grid.d_phi);
  for (int i = 0; i < np; ++i) {
    const double cti = ct / grid.sin_phi[i];
    for (int j = 0; j < nt; ++j) {
      const int p = grid.index(i, j);
      // Theta part: gather from the neighbours' stencils.
      const int jm = grid.index(i, (j + nt - 1) % nt);
      const int jp = grid.index(i, (j + 1) % nt);
      for (int c = 0; c < 3; ++c)
        out(p, c) += (w.m(jm, c) - w.m(jp, c)) * cti;

      // Phi part: scatter this point's stencil.
      if (i == 0) {
        const int p1 = grid.index(1, j), p2 = grid.index(2, j);
        for (int c = 0; c < 3; ++c) {
          const double v = w.m(p, 3 + c) * cp;
          out(p, c) += -3.0 * v;
          out(p1, c) += 4.0 * v;
          out(p2, c) += -v;
        }
      } else if (i == np - 1) {
        const int p1 = grid.index(np - 2, j), p2 = grid.index(np - 3, j);
        for (int c = 0; c < 3; ++c) {
          const double v = w.m(p, 3 + c) * cp;
          out(p, c) += 3.0 * v;
          out(p1, c) += -4.0 * v;
          out(p2, c) += v;
        }
      } else {
        const int ip = grid.index(i + 1, j), im = grid.index(i - 1, j);
        for (int c = 0; c < 3; ++c) {
          const double v = w.m(p, 3 + c) * cp;
          out(ip, c) += v;
          out(im, c) += -v;
        }
      }
    }
  }
  return out;
}

ScalarField gram_determinant(const SphericalGrid& grid, const OneForm& alpha) {
  ScalarField det(grid.points());
  for (int p = 0; p < grid.points(); ++p) {
    const auto r = alpha.m.row(p);
    const double g11 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    const double g22 = r[3] * r[3] + r[4] * r[4] + r[5] * r[5];
    const double g12 = r[0] * r[3] + r[1] * r[4] + r[2] * r[5];
    det[p] = g11 * g22 - g12 * g12;
  }
  return det;
}

void require_full_rank(const SphericalGrid& grid, const OneForm& alpha,
                       const char* where) {
  ScalarField det = gram_determinant(grid, alpha);
  const double scale = det.mean();
  const double tol = kRankTolRel * scale;
  for (int p = 0; p < grid.points(); ++p) {
    if (!(det[p] > tol)) {
      const int i = p / grid.n_theta;
      const int j = p % grid.n_theta;
      throw RankDeficiencyError(
          std::string(where) + ": rank-deficient one-form at phi row " +
              std::to_string(i) + ", theta column " + std::to_string(j) +
              " (det " + std::to_string(det[p]) + ")",
          i, j);
    }
  }
}

}  // namespace surfelastic
