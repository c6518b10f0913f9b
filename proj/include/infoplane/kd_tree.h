#pragma once

#include <Eigen/Dense>
#include <vector>

namespace infoplane {

// Static k-d tree over the rows of a matrix, Euclidean metric. The tree keeps
// a reference to `points`; the matrix must outlive it.
class KdTree {
 public:
  explicit KdTree(const Eigen::MatrixXd& points, int leaf_size = 16);

  // Indices of the k nearest rows to `query`, ordered by (distance, index).
  std::vector<int> Nearest(const Eigen::VectorXd& query, int k) const;

  // Every row with squared distance <= radius_sq.
  std::vector<int> WithinRadius(const Eigen::VectorXd& query,
                                double radius_sq) const;

  double SquaredDistance(const Eigen::VectorXd& query, int row) const;

 private:
  struct Node {
    int begin = 0;
    int end = 0;
    int split_dim = -1;  // -1 marks a leaf
    double split_value = 0.0;
    int left = -1;
    int right = -1;
  };

  int Build(int begin, int end);

  const Eigen::MatrixXd& points_;
  int leaf_size_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

}  // namespace infoplane
