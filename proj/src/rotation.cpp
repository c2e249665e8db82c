#include "surfelastic/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace surfelastic {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
  return m;
}

Mat3 exp_so3(const Vec3& r) {
  const double th2 = r.squaredNorm();
  const double th = std::sqrt(th2);
  double c1, c2;  // sin(th)/th, (1-cos(th))/th^2
  if (th < 1e-4) {
    c1 = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
    c2 = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
  } else {
    c1 = std::sin(th) / th;
    c2 = (1.0 - std::cos(th)) / th2;
  }
  Mat3 k = skew(r);
  return Mat3::Identity() + c1 * k + c2 * (k * k);
}

Mat3 left_jacobian_so3(const Vec3& r) {
  const double th2 = r.squaredNorm();
  const double th = std::sqrt(th2);
  double c2, c3;  // (1-cos)/th^2, (th - sin)/th^3
  if (th < 1e-4) {
    c2 = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
    c3 = 1.0 / 6.0 - th2 / 120.0 + th2 * th2 / 5040.0;
  } else {
    c2 = (1.0 - std::cos(th)) / th2;
    c3 = (th - std::sin(th)) / (th2 * th);
  }
  Mat3 k = skew(r);
  return Mat3::Identity() + c2 * k + c3 * (k * k);
}

Vec3 log_so3(const Mat3& R) {
  const double tr = std::clamp((R.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double th = std::acos(tr);
  Vec3 w(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  if (th < 1e-7) return 0.5 * w;
  if (th > std::numbers::pi - 1e-5) {
    // Near pi: extract the axis from the symmetric part.
    Mat3 s = 0.5 * (R + Mat3::Identity());
    Vec3 axis(std::sqrt(std::max(0.0, s(0, 0))),
              std::sqrt(std::max(0.0, s(1, 1))),
              std::sqrt(std::max(0.0, s(2, 2))));
    int k = 0;
    axis.cwiseAbs().maxCoeff(&k);
    for (int i = 0; i < 3; ++i)
      if (i != k && s(k, i) < 0) axis[i] = -axis[i];
    return th * axis.normalized();
  }
  return (th / (2.0 * std::sin(th))) * w;
}

const std::vector<Mat3>& icosahedral_rotations() {
  static const std::vector<Mat3> group = [] {
    const double gr = (1.0 + std::sqrt(5.0)) / 2.0;
    Vec3 v0 = Vec3(0, 1, gr).normalized();
    Vec3 v1 = Vec3(0, -1, gr).normalized();
    const double a = 2.0 * std::numbers::pi / 5.0;
    Mat3 g1 = Eigen::AngleAxisd(a, v0).toRotationMatrix();
    Mat3 g2 = Eigen::AngleAxisd(a, v1).toRotationMatrix();

    std::vector<Mat3> elems = {Mat3::Identity()};
    auto contains = [&](const Mat3& m) {
      for (const auto& e : elems)
        if ((e - m).cwiseAbs().maxCoeff() < 1e-9) return true;
      return false;
    };
    // Closure under the two generators.
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const Mat3* g : {&g1, &g2}) {
        Mat3 m = (*g) * elems[i];
        if (!contains(m)) elems.push_back(m);
      }
    }
    if (elems.size() != 60)
      throw Error("icosahedral group generation produced " +
                  std::to_string(elems.size()) + " elements");
    // Deterministic order: identity first, then by rotation angle and
    // lexicographic entries.
    std::sort(elems.begin(), elems.end(), [](const Mat3& x, const Mat3& y) {
      double tx = x.trace(), ty = y.trace();
      if (std::abs(tx - ty) > 1e-9) return tx > ty;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (std::abs(x(i, j) - y(i, j)) > 1e-9) return x(i, j) > y(i, j);
      return false;
    });
    return elems;
  }();
  return group;
}

}  // namespace surfelastic
