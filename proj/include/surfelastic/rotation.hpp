#pragma once

#include <vector>

#include "surfelastic/types.hpp"

namespace surfelastic {

/// Axis-angle rotation parameters r in R^3; R = exp(skew(r)).
struct RotationParams {
  Vec3 r = Vec3::Zero();
};

Mat3 skew(const Vec3& v);

/// Rodrigues formula, series-stable near zero.
Mat3 exp_so3(const Vec3& r);

/// Left Jacobian of SO(3): exp(skew(r + d)) ~ exp(skew(J_l(r) d)) exp(skew(r)),
/// so dR/dr_j = skew(J_l(r) e_j) R.
Mat3 left_jacobian_so3(const Vec3& r);

/// Log map (axis-angle of a rotation matrix).
Vec3 log_so3(const Mat3& R);

/// The 60 orientation-preserving rotations of the icosahedral group, in a
/// deterministic frozen order (identity first).
const std::vector<Mat3>& icosahedral_rotations();

}  // namespace surfelastic
