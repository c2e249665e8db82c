#include "surfelastic/srnf.hpp"

#include <cmath>

namespace surfelastic {

Field3 srnf_of_form(const SphericalGrid& grid, const OneForm& alpha) {
  Field3 q(grid.points(), 3);
  for (int p = 0; p < grid.points(); ++p) {
    const Mat32 a = alpha.at(p);
    // Outward normal: phi column x theta column (matches e2 x e3 = e1 on
    // the round sphere). |cross| = sqrt(det(a^T a)) by Lagrange identity.
    const Vec3 cross = a.col(1).cross(a.col(0));
    const double area = cross.norm();
    if (!(area > 0.0)) {
      const int i = p / grid.n_theta;
      const int j = p % grid.n_theta;
      throw ValidationError("srnf: degenerate normal at phi row " +
                            std::to_string(i) + ", theta column " +
                            std::to_string(j));
    }
    q.row(p) = (cross / std::sqrt(area)).transpose();
  }
  return q;
}

Field3 srnf(const SphericalGrid& grid, const Field3& f) {
  return srnf_of_form(grid, differential(grid, f));
}

double srnf_l2_distance(const SphericalGrid& grid, const Field3& q1,
                        const Field3& q2) {
  if (q1.rows() != grid.points() || q2.rows() != grid.points())
    throw ValidationError("srnf_l2_distance: fields must share the grid");
  ScalarField diff2 = (q1 - q2).rowwise().squaredNorm();
  return std::sqrt(std::max(0.0, integrate(grid, diff2)));
}

double surface_area(const SphericalGrid& grid, const Field3& f) {
  OneForm alpha = differential(grid, f);
  ScalarField root_det = gram_determinant(grid, alpha).cwiseSqrt();
  return integrate(grid, root_det);
}

}  // namespace surfelastic
