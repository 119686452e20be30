#include "disf/errors.hpp"
#include "disf/solvers.hpp"

namespace disf {

Vec3 trans_refine_step(GripperState& state,
                       CanonicalGripperSurface& posed_surface,
                       CorrespondenceSet& c) {
  const std::size_t n = c.total();
  if (n == 0)
    throw Error(ErrorCode::precondition, "empty correspondence set");
  Vec3 cf = Vec3::Zero();
  Vec3 co = Vec3::Zero();
  for (const auto& side : c.finger) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      cf += side.p[i];
      co += side.q[i];
    }
  }
  cf /= static_cast<double>(n);
  co /= static_cast<double>(n);
  const Vec3 tc = co - cf;

  posed_surface = transform_finger_surface(posed_surface, Mat3::Identity(), tc,
                                           0.0, Vec3::UnitY());
  for (auto& side : c.finger)
    for (auto& p : side.p) p += tc;
  state.translation += tc;
  return tc;
}

}  // namespace disf
