#include "disf/quality.hpp"

namespace disf {

double surface_distance_error(const CorrespondenceSet& c) {
  double sum = 0.0;
  for (const auto& side : c.finger) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      const double r = (side.p[i] - side.q[i]).dot(side.nq[i]);
      sum += r * r;
    }
  }
  return sum;
}

double normal_alignment_error(const CorrespondenceSet& c, const Mat3& R) {
  double sum = 0.0;
  for (const auto& side : c.finger) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      const double r = (R * side.np[i]).dot(side.nq[i]) + 1.0;
      sum += r * r;
    }
  }
  return sum;
}

double approach_alignment_error(const Vec3& nz, const Vec3& napp,
                                std::size_t n_pairs, const Mat3& R) {
  const double r = (R * nz).dot(napp) - 1.0;
  return static_cast<double>(n_pairs) * r * r;
}

double combined_rotation_error(const CorrespondenceSet& c, const Vec3& nz,
                               const Vec3& napp, double beta, const Mat3& R) {
  return normal_alignment_error(c, R) +
         beta * beta * approach_alignment_error(nz, napp, c.total(), R);
}

double geom_error(const CorrespondenceSet& c, const QualityWeights& weights) {
  return surface_distance_error(c) +
         weights.alpha * weights.alpha * normal_alignment_error(c);
}

double com_error(const OrientedPointCloud& object,
                 const CanonicalGripperSurface& posed_surface) {
  return (centroid(object) - surface_centroid(posed_surface)).norm();
}

QualityReport evaluate_quality(const OrientedPointCloud& object,
                               const CanonicalGripperSurface& posed_surface,
                               const CorrespondenceSet& c, const Vec3& nz,
                               const Vec3& napp,
                               const QualityWeights& weights) {
  QualityReport rep;
  rep.e_p = surface_distance_error(c);
  rep.e_n = normal_alignment_error(c);
  rep.e_a = approach_alignment_error(nz, napp, c.total());
  rep.e_na = rep.e_n + weights.beta * weights.beta * rep.e_a;
  rep.e_geom = rep.e_p + weights.alpha * weights.alpha * rep.e_n;
  rep.e_com_m = com_error(object, posed_surface);
  return rep;
}

}  // namespace disf
