#ifndef DISF_KDTREE_HPP
#define DISF_KDTREE_HPP

#include <cstddef>
#include <vector>

#include "disf/geometry.hpp"

namespace disf {

// Exact 3-d kd-tree over a fixed point set. Queries are deterministic:
// distance ties resolve to the lowest point index.
class KdTree {
 public:
  explicit KdTree(const std::vector<Vec3>& points);

  std::size_t size() const { return pts_.size(); }

  /// Index of the nearest point (lowest index on exact ties). Cloud must be
  /// non-empty.
  int nearest(const Vec3& q) const;

  /// Indices of the k nearest points, ordered by (distance, index).
  std::vector<int> knn(const Vec3& q, int k) const;

  /// Indices of all points within radius r, ordered by index.
  std::vector<int> radius(const Vec3& q, double r) const;

 private:
  struct Node {
    int axis = -1;      // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_
  };

  int build(int begin, int end, int depth);

  template <typename Visit>
  void search(int node, const Vec3& q, double& bound, Visit&& visit) const;

  std::vector<Vec3> pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace disf

#endif
