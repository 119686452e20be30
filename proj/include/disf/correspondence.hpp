#ifndef DISF_CORRESPONDENCE_HPP
#define DISF_CORRESPONDENCE_HPP

#include <cstddef>
#include <vector>

#include "disf/gripper.hpp"
#include "disf/kdtree.hpp"

namespace disf {

struct MatchParams {
  double max_distance = 0.02;                      // meters
  double max_normal_angle = 60.0 * M_PI / 180.0;   // radians, antipodal filter
  int min_pairs_per_finger = 3;

  void validate() const;
};

// Matched (finger point, finger normal) <-> (object point, object normal)
// pairs, kept per finger.
struct CorrespondenceSet {
  struct Side {
    std::vector<Vec3> p;   // posed finger points
    std::vector<Vec3> np;  // finger normals
    std::vector<Vec3> q;   // object points
    std::vector<Vec3> nq;  // object normals
    std::vector<int> object_index;

    std::size_t size() const { return p.size(); }
  };

  Side finger[2];

  std::size_t total() const { return finger[0].size() + finger[1].size(); }
};

/// Matches each posed finger point to its nearest object point and keeps the
/// pair iff the distance is within max_distance and the finger normal is
/// antipodal to the object normal within max_normal_angle. Throws
/// OneSidedCorrespondence when either finger ends up below
/// min_pairs_per_finger. `tree` must index `object.points`.
CorrespondenceSet match(const CanonicalGripperSurface& posed_surface,
                        const OrientedPointCloud& object, const KdTree& tree,
                        const MatchParams& params);

CorrespondenceSet match(const CanonicalGripperSurface& posed_surface,
                        const OrientedPointCloud& object,
                        const MatchParams& params);

}  // namespace disf

#endif
