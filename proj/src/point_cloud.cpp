#include "disf/point_cloud.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>

#include "disf/errors.hpp"
#include "disf/kdtree.hpp"

namespace disf {

Vec3 centroid(const OrientedPointCloud& cloud) {
  if (cloud.points.empty())
    throw Error(ErrorCode::precondition, "centroid of empty cloud");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : cloud.points) sum += p;
  return sum / static_cast<double>(cloud.points.size());
}

OrientedPointCloud apply_transform(const RigidTransform& T,
                                   const OrientedPointCloud& cloud) {
  OrientedPointCloud out;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) out.points.push_back(T.apply(p));
  out.normals.reserve(cloud.normals.size());
  for (const Vec3& n : cloud.normals) out.normals.push_back(T.rotate(n));
  out.labels = cloud.labels;
  return out;
}

OrientedPointCloud estimate_normals(const OrientedPointCloud& cloud,
                                    const NormalEstimationParams& params) {
  if (params.k_neighbors < 3)
    throw Error(ErrorCode::invalid_argument, "k_neighbors must be >= 3");
  if (cloud.size() < static_cast<std::size_t>(params.k_neighbors))
    throw Error(ErrorCode::precondition,
                "estimate_normals: cloud smaller than k_neighbors");
  KdTree tree(cloud.points);
  OrientedPointCloud out = cloud;
  out.normals.assign(cloud.size(), Vec3::Zero());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const std::vector<int> nn = tree.knn(cloud.points[i], params.k_neighbors);
    Vec3 mean = Vec3::Zero();
    for (int j : nn) mean += cloud.points[j];
    mean /= static_cast<double>(nn.size());
    Mat3 cov = Mat3::Zero();
    for (int j : nn) {
      const Vec3 d = cloud.points[j] - mean;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    if (eig.eigenvalues().maxCoeff() <= 1e-24)
      throw Error(ErrorCode::degenerate,
                  "estimate_normals: degenerate neighborhood at point " +
                      std::to_string(i));
    out.normals[i] = eig.eigenvectors().col(0).normalized();
  }
  return out;
}

OrientedPointCloud orient_normals_outward(const OrientedPointCloud& cloud) {
  if (!cloud.has_normals())
    throw Error(ErrorCode::precondition,
                "orient_normals_outward: normals missing");
  const Vec3 c = centroid(cloud);
  OrientedPointCloud out = cloud;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.normals[i].dot(out.points[i] - c) < 0.0)
      out.normals[i] = -out.normals[i];
  }
  return out;
}

OrientedPointCloud voxel_downsample(const OrientedPointCloud& cloud,
                                    double voxel_size) {
  if (!(voxel_size > 0.0))
    throw Error(ErrorCode::invalid_argument, "voxel_size must be positive");
  using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
  struct Cell {
    Vec3 pos_sum = Vec3::Zero();
    Vec3 normal_sum = Vec3::Zero();
    int count = 0;
    std::vector<int> members;
  };
  std::map<Key, Cell> cells;  // ordered: deterministic output by voxel index
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    const Key key{static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
                  static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
                  static_cast<std::int64_t>(std::floor(p.z() / voxel_size))};
    Cell& cell = cells[key];
    cell.pos_sum += p;
    if (cloud.has_normals()) cell.normal_sum += cloud.normals[i];
    cell.count += 1;
    cell.members.push_back(static_cast<int>(i));
  }
  OrientedPointCloud out;
  out.points.reserve(cells.size());
  if (cloud.has_normals()) out.normals.reserve(cells.size());
  if (cloud.has_labels()) out.labels.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    const Vec3 mean = cell.pos_sum / cell.count;
    out.points.push_back(mean);
    int rep = cell.members.front();  // member closest to the voxel mean
    double best = (cloud.points[rep] - mean).squaredNorm();
    for (int m : cell.members) {
      const double d2 = (cloud.points[m] - mean).squaredNorm();
      if (d2 < best) {
        best = d2;
        rep = m;
      }
    }
    if (cloud.has_normals()) {
      const Vec3 n = cell.normal_sum / cell.count;
      if (n.norm() > 1e-12) {
        out.normals.push_back(n.normalized());
      } else {
        // Opposing normals in one voxel: fall back to the representative.
        out.normals.push_back(cloud.normals[rep]);
      }
    }
    if (cloud.has_labels()) out.labels.push_back(cloud.labels[rep]);
  }
  return out;
}

OrientedPointCloud axis_crop(const OrientedPointCloud& cloud, int axis,
                             double lo, double hi) {
  if (axis < 0 || axis > 2)
    throw Error(ErrorCode::invalid_argument, "axis_crop: axis must be 0..2");
  OrientedPointCloud out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double c = cloud.points[i][axis];
    if (c < lo || c > hi) continue;
    out.points.push_back(cloud.points[i]);
    if (cloud.has_normals()) out.normals.push_back(cloud.normals[i]);
    if (cloud.has_labels()) out.labels.push_back(cloud.labels[i]);
  }
  return out;
}

}  // namespace disf
