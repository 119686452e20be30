#ifndef DISF_GEOMETRY_HPP
#define DISF_GEOMETRY_HPP

#include <Eigen/Core>

namespace disf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Cross-product matrix: skew(w) * u == w.cross(u).
Mat3 skew(const Vec3& w);

/// First-order rotation approximation I + skew(w). Not orthonormal for
/// nonzero w; only used to derive least-squares coefficients, never applied
/// to geometry.
Mat3 small_rotation(const Vec3& w);

/// Exact axis-angle to rotation matrix. Angles below 1e-12 return identity.
Mat3 rodrigues(const Vec3& w);

bool is_rotation(const Mat3& R, double tol = 1e-9);

struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 rotate(const Vec3& n) const { return rotation * n; }
  RigidTransform inverse() const;
};

/// (a * b)(x) == a(b(x)).
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

}  // namespace disf

#endif
