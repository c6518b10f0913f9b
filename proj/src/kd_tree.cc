#include "infoplane/kd_tree.h"

#include <algorithm>
#include <queue>
#include <utility>

namespace infoplane {

KdTree::KdTree(const Eigen::MatrixXd& points, int leaf_size)
    : points_(points), leaf_size_(std::max(1, leaf_size)) {
  order_.resize(points.rows());
  for (int i = 0; i < static_cast<int>(order_.size()); ++i) order_[i] = i;
  nodes_.reserve(2 * order_.size() / leaf_size_ + 2);
  if (!order_.empty()) Build(0, static_cast<int>(order_.size()));
}

int KdTree::Build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end, -1, 0.0, -1, -1});
  if (end - begin <= leaf_size_) return id;

  // Split on the widest dimension at the median.
  int best_dim = 0;
  double best_spread = -1.0;
  for (int d = 0; d < points_.cols(); ++d) {
    double lo = points_(order_[begin], d);
    double hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      const double v = points_(order_[i], d);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = d;
    }
  }
  if (best_spread <= 0.0) return id;  // all points coincide

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](int l, int r) {
                     return points_(l, best_dim) < points_(r, best_dim);
                   });
  nodes_[id].split_dim = best_dim;
  nodes_[id].split_value = points_(order_[mid], best_dim);
  const int left = Build(begin, mid);
  const int right = Build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::SquaredDistance(const Eigen::VectorXd& query, int row) const {
  return (points_.row(row).transpose() - query).squaredNorm();
}

std::vector<int> KdTree::Nearest(const Eigen::VectorXd& query, int k) const {
  using Entry = std::pair<double, int>;  // (distance^2, index), max-heap
  std::priority_queue<Entry> heap;
  if (nodes_.empty() || k <= 0) return {};

  auto visit = [&](auto&& self, int node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.split_dim < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int row = order_[i];
        const Entry e{SquaredDistance(query, row), row};
        if (static_cast<int>(heap.size()) < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      return;
    }
    const double diff = query(node.split_dim) - node.split_value;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    if (static_cast<int>(heap.size()) < k || diff * diff <= heap.top().first) {
      self(self, far);
    }
  };
  visit(visit, 0);

  std::vector<Entry> found;
  found.reserve(heap.size());
  while (!heap.empty()) {
    found.push_back(heap.top());
    heap.pop();
  }
  std::sort(found.begin(), found.end());
  std::vector<int> out;
  out.reserve(found.size());
  for (const auto& e : found) out.push_back(e.second);
  return out;
}

std::vector<int> KdTree::WithinRadius(const Eigen::VectorXd& query,
                                      double radius_sq) const {
  std::vector<int> out;
  if (nodes_.empty()) return out;
  auto visit = [&](auto&& self, int node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.split_dim < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        if (SquaredDistance(query, order_[i]) <= radius_sq) {
          out.push_back(order_[i]);
        }
      }
      return;
    }
    const double diff = query(node.split_dim) - node.split_value;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    if (diff * diff <= radius_sq) self(self, far);
  };
  visit(visit, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace infoplane
