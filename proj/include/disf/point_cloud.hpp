#ifndef DISF_POINT_CLOUD_HPP
#define DISF_POINT_CLOUD_HPP

#include <cstddef>
#include <vector>

#include "disf/geometry.hpp"

namespace disf {

// Positions in meters plus optional unit normals and optional per-point
// source labels. Clouds are treated as immutable values after construction;
// all operations return new clouds.
struct OrientedPointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // empty == normals missing
  std::vector<int> labels;    // empty == unlabeled

  std::size_t size() const { return points.size(); }
  bool has_normals() const { return !normals.empty(); }
  bool has_labels() const { return !labels.empty(); }
};

struct NormalEstimationParams {
  int k_neighbors = 30;
};

/// Arithmetic mean of positions. Throws on an empty cloud.
Vec3 centroid(const OrientedPointCloud& cloud);

/// p -> R p + t, n -> R n. Labels carried through.
OrientedPointCloud apply_transform(const RigidTransform& T,
                                   const OrientedPointCloud& cloud);

/// Per-point local plane fit: normal is the smallest-eigenvalue eigenvector
/// of the k-nearest-neighbor covariance. Output signs are arbitrary; run
/// orient_normals_outward before planning.
OrientedPointCloud estimate_normals(const OrientedPointCloud& cloud,
                                    const NormalEstimationParams& params);

/// Flips every normal with n . (p - centroid) < 0. Idempotent.
OrientedPointCloud orient_normals_outward(const OrientedPointCloud& cloud);

/// One representative per occupied voxel: mean position, renormalized mean
/// normal. Output ordered by lexicographic voxel index.
OrientedPointCloud voxel_downsample(const OrientedPointCloud& cloud,
                                    double voxel_size);

/// Keeps points whose coordinate on `axis` (0=x,1=y,2=z) lies in [lo, hi].
OrientedPointCloud axis_crop(const OrientedPointCloud& cloud, int axis,
                             double lo, double hi);

}  // namespace disf

#endif
