#ifndef DISF_QUALITY_HPP
#define DISF_QUALITY_HPP

#include "disf/correspondence.hpp"

namespace disf {

struct QualityWeights {
  double alpha = 0.1;
  double beta = 0.85;
};

// Scalar grasp-quality measures. All take the correspondence set at the
// current pose; the optional rotation R evaluates the measure under a
// virtual extra rotation of the finger normals (used by the solver guard)
// without moving any geometry.

/// E_p: sum of squared point-to-plane distances over all pairs.
double surface_distance_error(const CorrespondenceSet& c);

/// E_n: sum over all pairs of ((R np)^T nq + 1)^2.
double normal_alignment_error(const CorrespondenceSet& c,
                              const Mat3& R = Mat3::Identity());

/// E_a: n_pairs * ((R nz)^T napp - 1)^2. The summand is pair-independent;
/// the sum multiplies it by the pair count.
double approach_alignment_error(const Vec3& nz, const Vec3& napp,
                                std::size_t n_pairs,
                                const Mat3& R = Mat3::Identity());

/// E_na = E_n + beta^2 E_a, the rotation-stage objective.
double combined_rotation_error(const CorrespondenceSet& c, const Vec3& nz,
                               const Vec3& napp, double beta,
                               const Mat3& R = Mat3::Identity());

/// E_geom = E_p + alpha^2 E_n at the current pose.
double geom_error(const CorrespondenceSet& c, const QualityWeights& weights);

/// E_CoM: distance between the object centroid and the posed gripper-surface
/// centroid, meters.
double com_error(const OrientedPointCloud& object,
                 const CanonicalGripperSurface& posed_surface);

struct QualityReport {
  double e_p = 0.0;
  double e_n = 0.0;
  double e_a = 0.0;
  double e_na = 0.0;
  double e_geom = 0.0;
  double e_com_m = 0.0;
};

QualityReport evaluate_quality(const OrientedPointCloud& object,
                               const CanonicalGripperSurface& posed_surface,
                               const CorrespondenceSet& c, const Vec3& nz,
                               const Vec3& napp, const QualityWeights& weights);

}  // namespace disf

#endif
