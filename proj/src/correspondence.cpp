#include "disf/correspondence.hpp"

#include <cmath>

#include "disf/errors.hpp"

namespace disf {

void MatchParams::validate() const {
  if (!(max_distance > 0.0))
    throw Error(ErrorCode::invalid_argument, "max_distance must be positive");
  if (!(max_normal_angle > 0.0) || max_normal_angle > M_PI)
    throw Error(ErrorCode::invalid_argument,
                "max_normal_angle must be in (0, pi]");
  if (min_pairs_per_finger < 1)
    throw Error(ErrorCode::invalid_argument,
                "min_pairs_per_finger must be >= 1");
}

namespace {
void match_side(const OrientedPointCloud& finger,
                const OrientedPointCloud& object, const KdTree& tree,
                const MatchParams& params, CorrespondenceSet::Side& side) {
  const double max_d2 = params.max_distance * params.max_distance;
  const double min_cos = std::cos(params.max_normal_angle);
  for (std::size_t i = 0; i < finger.size(); ++i) {
    const Vec3& p = finger.points[i];
    const int j = tree.nearest(p);
    const Vec3& q = object.points[j];
    if ((p - q).squaredNorm() > max_d2) continue;
    const Vec3& np = finger.normals[i];
    const Vec3& nq = object.normals[j];
    // Antipodal filter: angle(np, -nq) <= max_normal_angle.
    if (np.dot(-nq) < min_cos) continue;
    side.p.push_back(p);
    side.np.push_back(np);
    side.q.push_back(q);
    side.nq.push_back(nq);
    side.object_index.push_back(j);
  }
}
}  // namespace

CorrespondenceSet match(const CanonicalGripperSurface& posed_surface,
                        const OrientedPointCloud& object, const KdTree& tree,
                        const MatchParams& params) {
  params.validate();
  if (!object.has_normals())
    throw Error(ErrorCode::precondition, "match: object normals missing");
  CorrespondenceSet out;
  match_side(posed_surface.finger1, object, tree, params, out.finger[0]);
  match_side(posed_surface.finger2, object, tree, params, out.finger[1]);
  for (int j = 0; j < 2; ++j) {
    if (out.finger[j].size() <
        static_cast<std::size_t>(params.min_pairs_per_finger))
      throw OneSidedCorrespondence(
          j + 1, "finger " + std::to_string(j + 1) + " has " +
                     std::to_string(out.finger[j].size()) +
                     " correspondences, need " +
                     std::to_string(params.min_pairs_per_finger));
  }
  return out;
}

CorrespondenceSet match(const CanonicalGripperSurface& posed_surface,
                        const OrientedPointCloud& object,
                        const MatchParams& params) {
  KdTree tree(object.points);
  return match(posed_surface, object, tree, params);
}

}  // namespace disf
