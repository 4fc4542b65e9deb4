#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace relio {

/// Static 3-D kd-tree over a point array. Build and queries are deterministic:
/// ties during construction are broken by original index, and k-NN results are
/// returned sorted by (distance, index).
class KdTree {
 public:
  static constexpr std::uint32_t kNoMatch = std::numeric_limits<std::uint32_t>::max();

  struct Neighbor {
    std::uint32_t index;
    double squared_distance;
  };

  KdTree() = default;

  explicit KdTree(std::vector<Eigen::Vector3d> points) { build(std::move(points)); }

  void build(std::vector<Eigen::Vector3d> points) {
    points_ = std::move(points);
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.clear();
    nodes_.reserve(points_.size());
    if (!points_.empty()) {
      root_ = buildRecursive(0, static_cast<std::uint32_t>(points_.size()));
    } else {
      root_ = kInvalid;
    }
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Eigen::Vector3d>& points() const { return points_; }

  /// k nearest neighbors of q, optionally bounded by max_radius.
  std::vector<Neighbor> knn(const Eigen::Vector3d& q, std::size_t k,
                            double max_radius = std::numeric_limits<double>::infinity()) const {
    std::vector<Neighbor> heap;
    heap.reserve(k + 1);
    if (root_ != kInvalid && k > 0) {
      searchRecursive(root_, q, k, max_radius * max_radius, heap);
    }
    std::sort(heap.begin(), heap.end(), [](const Neighbor& a, const Neighbor& b) {
      if (a.squared_distance != b.squared_distance) return a.squared_distance < b.squared_distance;
      return a.index < b.index;
    });
    return heap;
  }

  /// Nearest neighbor; index == UINT32_MAX when the tree is empty or all
  /// points are farther than max_radius.
  Neighbor nearest(const Eigen::Vector3d& q,
                   double max_radius = std::numeric_limits<double>::infinity()) const {
    auto res = knn(q, 1, max_radius);
    if (res.empty()) return Neighbor{kNoMatch, std::numeric_limits<double>::infinity()};
    return res.front();
  }

 private:
  static constexpr std::uint32_t kInvalid = kNoMatch;

  struct Node {
    std::uint32_t point{kInvalid};
    std::uint32_t left{kInvalid};
    std::uint32_t right{kInvalid};
    std::uint8_t axis{0};
  };

  std::uint32_t buildRecursive(std::uint32_t begin, std::uint32_t end) {
    if (begin >= end) return kInvalid;
    // Split on the widest axis of this subset's bounding box.
    Eigen::Vector3d lo = points_[order_[begin]];
    Eigen::Vector3d hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
      lo = lo.cwiseMin(points_[order_[i]]);
      hi = hi.cwiseMax(points_[order_[i]]);
    }
    const Eigen::Vector3d extent = hi - lo;
    std::uint8_t axis = 0;
    if (extent.y() > extent.x()) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = points_[a][axis];
                       const double cb = points_[b][axis];
                       if (ca != cb) return ca < cb;
                       return a < b;
                     });

    Node node;
    node.point = order_[mid];
    node.axis = axis;
    const std::uint32_t self = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(node);
    const std::uint32_t left = buildRecursive(begin, mid);
    const std::uint32_t right = buildRecursive(mid + 1, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void searchRecursive(std::uint32_t node_id, const Eigen::Vector3d& q, std::size_t k,
                       double max_sq_radius, std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[node_id];
    const Eigen::Vector3d& p = points_[node.point];
    const double d2 = (p - q).squaredNorm();
    const double worst = heap.size() == k ? heap.front().squared_distance
                                          : std::numeric_limits<double>::infinity();
    if (d2 <= max_sq_radius && (heap.size() < k || d2 < worst || (d2 == worst && node.point < heap.front().index))) {
      heap.push_back(Neighbor{node.point, d2});
      std::push_heap(heap.begin(), heap.end(), cmp);
      if (heap.size() > k) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        heap.pop_back();
      }
    }

    const double delta = q[node.axis] - p[node.axis];
    const std::uint32_t near = delta < 0.0 ? node.left : node.right;
    const std::uint32_t far = delta < 0.0 ? node.right : node.left;
    if (near != kInvalid) searchRecursive(near, q, k, max_sq_radius, heap);
    const double bound = heap.size() == k ? heap.front().squared_distance
                                          : std::numeric_limits<double>::infinity();
    if (far != kInvalid && delta * delta <= std::min(bound, max_sq_radius)) {
      searchRecursive(far, q, k, max_sq_radius, heap);
    }
  }

  static bool cmp(const Neighbor& a, const Neighbor& b) {
    if (a.squared_distance != b.squared_distance) return a.squared_distance < b.squared_distance;
    return a.index > b.index;  // max-heap prefers evicting higher index on ties
  }

  std::vector<Eigen::Vector3d> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::uint32_t root_{kInvalid};
};

}  // namespace relio
