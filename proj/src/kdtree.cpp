#include "disf/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "disf/errors.hpp"

namespace disf {

namespace {
constexpr int kLeafSize = 16;
}

KdTree::KdTree(const std::vector<Vec3>& points) : pts_(points) {
  order_.resize(pts_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  if (!pts_.empty()) root_ = build(0, static_cast<int>(pts_.size()), 0);
}

int KdTree::build(int begin, int end, int depth) {
  Node node;
  if (end - begin <= kLeafSize) {
    node.begin = begin;
    node.end = end;
    // Leaf ranges sorted by index so tie-breaks fall out of scan order.
    std::sort(order_.begin() + begin, order_.begin() + end);
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }
  // Split on the widest axis of the current range.
  Vec3 lo = pts_[order_[begin]], hi = lo;
  for (int i = begin; i < end; ++i) {
    lo = lo.cwiseMin(pts_[order_[i]]);
    hi = hi.cwiseMax(pts_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  const int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](int a, int b) {
                     if (pts_[a][axis] != pts_[b][axis])
                       return pts_[a][axis] < pts_[b][axis];
                     return a < b;
                   });
  node.axis = axis;
  node.split = pts_[order_[mid]][axis];
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  const int left = build(begin, mid, depth + 1);
  const int right = build(mid, end, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

template <typename Visit>
void KdTree::search(int ni, const Vec3& q, double& bound, Visit&& visit) const {
  const Node& node = nodes_[ni];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const int idx = order_[i];
      visit(idx, (pts_[idx] - q).squaredNorm());
    }
    return;
  }
  const double delta = q[node.axis] - node.split;
  const int near = delta <= 0.0 ? node.left : node.right;
  const int far = delta <= 0.0 ? node.right : node.left;
  search(near, q, bound, visit);
  if (delta * delta <= bound) search(far, q, bound, visit);
}

int KdTree::nearest(const Vec3& q) const {
  if (pts_.empty())
    throw Error(ErrorCode::precondition, "nearest query on empty kd-tree");
  double best = std::numeric_limits<double>::infinity();
  int best_idx = -1;
  search(root_, q, best, [&](int idx, double d2) {
    if (d2 < best || (d2 == best && idx < best_idx)) {
      best = d2;
      best_idx = idx;
    }
  });
  return best_idx;
}

std::vector<int> KdTree::knn(const Vec3& q, int k) const {
  if (k <= 0) return {};
  if (static_cast<std::size_t>(k) > pts_.size())
    throw Error(ErrorCode::precondition, "knn: k exceeds point count");
  using Entry = std::pair<double, int>;  // (d2, index), max-heap
  std::priority_queue<Entry> heap;
  double bound = std::numeric_limits<double>::infinity();
  search(root_, q, bound, [&](int idx, double d2) {
    const Entry e{d2, idx};
    if (static_cast<int>(heap.size()) < k) {
      heap.push(e);
      if (static_cast<int>(heap.size()) == k) bound = heap.top().first;
    } else if (e < heap.top()) {
      heap.pop();
      heap.push(e);
      bound = heap.top().first;
    }
  });
  std::vector<Entry> entries;
  entries.reserve(heap.size());
  while (!heap.empty()) {
    entries.push_back(heap.top());
    heap.pop();
  }
  std::sort(entries.begin(), entries.end());
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.second);
  return out;
}

std::vector<int> KdTree::radius(const Vec3& q, double r) const {
  std::vector<int> out;
  if (pts_.empty()) return out;
  double bound = r * r;
  // Fixed bound: search() prunes against it but we never shrink it.
  double prune = bound;
  search(root_, q, prune, [&](int idx, double d2) {
    if (d2 <= bound) out.push_back(idx);
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace disf
