#pragma once

// Plug-in information measures over discrete tables and conditional-mean
// variance estimators over representation samples. Everything is in bits.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infoplane {

enum class TaskKind { kClassification, kRegression };

std::string_view ToString(TaskKind kind);
TaskKind ParseTaskKind(std::string_view text);

struct DiscreteDistribution {
  std::vector<double> probs;
  std::vector<std::string> labels;

  // Normalizes non-negative counts. Throws InputError("empty distribution")
  // when they sum to zero.
  static DiscreteDistribution FromCounts(std::span<const double> counts);

  void Validate() const;
};

struct TableAxis {
  std::string name;
  std::vector<std::string> labels;
};

// Dense joint table over one or more named discrete axes, stored row-major
// (last axis fastest). Cells hold non-negative masses: integer counts when
// built from samples, probabilities when built analytically.
class ContingencyTable {
 public:
  ContingencyTable(std::vector<TableAxis> axes, std::vector<double> masses);

  // Counts symbol tuples. columns[k][i] is the symbol of row i on axis k;
  // axis k gets max(min_alphabet[k], max symbol + 1) labels "0", "1", ...
  static ContingencyTable FromSymbols(std::vector<std::string> names,
                                      const std::vector<std::vector<int>>& columns,
                                      std::vector<int> min_alphabet = {});

  const std::vector<TableAxis>& axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }
  std::size_t axis_size(std::size_t axis) const {
    return axes_[axis].labels.size();
  }
  const std::vector<double>& masses() const { return masses_; }
  double total() const { return total_; }

  // Throws InputError for unknown names.
  std::size_t AxisIndex(std::string_view name) const;
  double at(std::span<const std::size_t> index) const;

  // Sums out every axis not named in `keep`; the result's axes follow the
  // order of `keep`.
  ContingencyTable Marginal(const std::vector<std::string>& keep) const;

  // Exchanges the position of two axes.
  ContingencyTable Transposed(std::string_view first,
                              std::string_view second) const;

 private:
  std::vector<TableAxis> axes_;
  std::vector<double> masses_;
  std::vector<std::size_t> strides_;
  double total_ = 0.0;
};

double Entropy(const DiscreteDistribution& dist);
// Joint entropy of all axes of the table. Miller-Madow adds
// (m - 1) / (2 n ln 2) with m the number of occupied cells.
double Entropy(const ContingencyTable& table, bool miller_madow = false);
double MutualInformation(const ContingencyTable& table, std::string_view axis_x,
                         std::string_view axis_y, bool miller_madow = false);
double ConditionalEntropy(const ContingencyTable& table,
                          std::string_view target_axis,
                          std::string_view given_axis,
                          bool miller_madow = false);
// |Pr(T = 1 | G = 0) - Pr(T = 1 | G = 1)| for binary axes.
double DeltaConditional(const ContingencyTable& table,
                        std::string_view target_axis,
                        std::string_view given_axis);

inline double BitsToNats(double bits) { return bits * 0.69314718055994530942; }

// Small negatives within this band are rounding and are clamped to zero;
// anything below it is reported as a NumericalError.
inline constexpr double kNegativeClampTolerance = 1e-9;

enum class ConditionalMeanPath { kAuto, kGroupBy, kKnn };

struct EstimatorConfig {
  int discretization_bins = 0;  // 0: ceil(N^(1/3))
  int knn_k = 0;                // 0: ceil(sqrt(N))
  bool miller_madow = false;
  ConditionalMeanPath path = ConditionalMeanPath::kAuto;
};

// Columns with at most this many distinct values are conditioned on exactly;
// the remaining columns are binned (classification) or searched by kNN
// (regression) inside each stratum of the exact columns.
inline constexpr int kDiscreteColumnMaxLevels = 16;
// Representations with at most this many distinct rows skip binning.
inline constexpr int kExactSymbolMaxCells = 64;
// Group-by path threshold for conditional-mean variance.
inline constexpr int kGroupByMaxDistinct = 1024;

struct RepresentationSample {
  Eigen::MatrixXd z;  // N x d
  Eigen::VectorXd y;
  Eigen::VectorXd a;
  TaskKind kind = TaskKind::kRegression;

  Eigen::Index size() const { return z.rows(); }
  void Validate() const;
};

struct PlanePoint {
  double utility = 0.0;
  double leakage = 0.0;
  TaskKind kind = TaskKind::kRegression;
};

enum class ConditionalTarget { kY, kA };

// Var E[target | Z] with population (1/N) moments.
double ConditionalMeanVariance(const RepresentationSample& sample,
                               ConditionalTarget target,
                               const EstimatorConfig& config = {});

// Weighted group-by: groups[i] is the cell of row i. Unit weights when
// `weights` is empty.
double GroupedConditionalMeanVariance(std::span<const int> groups,
                                      std::span<const double> values,
                                      std::span<const double> weights = {});

// k-nearest-neighbour conditional means. Every point at exactly the k-th
// neighbour distance is included, so identical z rows share one estimate.
double KnnConditionalMeanVariance(const Eigen::MatrixXd& z,
                                  std::span<const double> values, int k);

// Closed-form path for Z = L phi with Gaussian phi ~ N(mu, sigma):
// Var E[<c, phi> | Z] = c' S L' (L S L')^+ L S c.
struct LinearGaussianConditioning {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd linear_map;
  Eigen::VectorXd coefficients;
};
double ConditionalMeanVariance(const LinearGaussianConditioning& model);

// Distinct-row ids ordered lexicographically by row value.
std::vector<int> RowSymbols(const Eigen::MatrixXd& z);

// Discrete symbols for a (possibly continuous) representation, used by the
// classification plug-in estimators.
std::vector<int> DiscretizeRepresentation(const Eigen::MatrixXd& z,
                                          const EstimatorConfig& config = {});

// Y x A x Z counts for a classification sample, axes named "y", "a", "z".
ContingencyTable ClassificationJoint(const RepresentationSample& sample,
                                     const EstimatorConfig& config = {});

PlanePoint EstimatePlanePoint(const RepresentationSample& sample,
                              const EstimatorConfig& config = {});

}  // namespace infoplane
