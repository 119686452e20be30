#include <algorithm>

#include "disf/errors.hpp"
#include "disf/solvers.hpp"

namespace disf {

FingerOptResult finger_opt_step(GripperState& state,
                                CanonicalGripperSurface& posed_surface,
                                CorrespondenceSet& c,
                                const GripperSpec& spec) {
  if (c.total() == 0)
    throw Error(ErrorCode::precondition, "empty correspondence set");
  const double d = state.aperture;
  if (d < spec.d_min - 1e-12 || d > spec.d_max + 1e-12)
    throw Error(ErrorCode::precondition, "aperture outside gripper range");

  // a_ij = 0.5 (-1)^(j-1) v . nq, b_ij = (p - q) . nq; the point-to-plane
  // residual after a displacement dd is b - a dd.
  double sum_ab = 0.0;
  double sum_aa = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const auto& side = c.finger[j - 1];
    const double sign = (j % 2 == 1) ? 0.5 : -0.5;  // 0.5 (-1)^(j-1)
    for (std::size_t i = 0; i < side.size(); ++i) {
      const double a = sign * state.finger_axis.dot(side.nq[i]);
      const double b = (side.p[i] - side.q[i]).dot(side.nq[i]);
      sum_ab += a * b;
      sum_aa += a * a;
    }
  }

  FingerOptResult result;
  if (sum_aa == 0.0) {
    throw DegenerateAperture(
        "all matched object normals are perpendicular to the finger axis");
  }
  const double dd_hat = sum_ab / sum_aa;
  result.unclamped = dd_hat;
  double dd = dd_hat;
  if (dd_hat + d < spec.d_min)
    dd = spec.d_min - d;
  else if (dd_hat + d > spec.d_max)
    dd = spec.d_max - d;
  result.delta_d = dd;

  posed_surface = transform_finger_surface(posed_surface, Mat3::Identity(),
                                           Vec3::Zero(), dd, state.finger_axis);
  for (int j = 1; j <= 2; ++j) {
    auto& side = c.finger[j - 1];
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j, as in Eq. (2)
    const Vec3 shift = 0.5 * sign * dd * state.finger_axis;
    for (auto& p : side.p) p += shift;
  }
  state.aperture = d + dd;
  return result;
}

}  // namespace disf
