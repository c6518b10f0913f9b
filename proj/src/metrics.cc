#include "infoplane/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "infoplane/error.h"
#include "infoplane/kd_tree.h"
#include "infoplane/linalg.h"

namespace infoplane {

std::string_view ToString(TaskKind kind) {
  return kind == TaskKind::kClassification ? "classification" : "regression";
}

TaskKind ParseTaskKind(std::string_view text) {
  if (text == "classification") return TaskKind::kClassification;
  if (text == "regression") return TaskKind::kRegression;
  throw InputError("unknown task kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution DiscreteDistribution::FromCounts(
    std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InputError("counts must be finite and non-negative");
    }
    total += c;
  }
  if (total <= 0.0) throw InputError("empty distribution");
  DiscreteDistribution dist;
  dist.probs.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    dist.probs.push_back(counts[i] / total);
    dist.labels.push_back(std::to_string(i));
  }
  return dist;
}

void DiscreteDistribution::Validate() const {
  if (probs.empty()) throw InputError("empty distribution");
  if (!labels.empty() && labels.size() != probs.size()) {
    throw InputError("label count does not match probability count");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw InputError("negative probability mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InputError("probability masses do not sum to 1");
  }
}

double Entropy(const DiscreteDistribution& dist) {
  dist.Validate();
  double h = 0.0;
  for (double p : dist.probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

// ---------------------------------------------------------------------------
// ContingencyTable

ContingencyTable::ContingencyTable(std::vector<TableAxis> axes,
                                   std::vector<double> masses)
    : axes_(std::move(axes)), masses_(std::move(masses)) {
  if (axes_.empty()) throw InputError("contingency table needs an axis");
  std::size_t cells = 1;
  for (const auto& axis : axes_) {
    if (axis.labels.empty()) {
      throw InputError("axis '" + axis.name + "' has no symbols");
    }
    cells *= axis.labels.size();
  }
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    for (std::size_t j = i + 1; j < axes_.size(); ++j) {
      if (axes_[i].name == axes_[j].name) {
        throw InputError("duplicate axis name '" + axes_[i].name + "'");
      }
    }
  }
  if (masses_.size() != cells) {
    throw InputError("mass tensor size does not match axis shape");
  }
  strides_.assign(axes_.size(), 1);
  for (std::size_t k = axes_.size() - 1; k > 0; --k) {
    strides_[k - 1] = strides_[k] * axes_[k].labels.size();
  }
  total_ = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw InputError("table masses must be finite and non-negative");
    }
    total_ += m;
  }
}

ContingencyTable ContingencyTable::FromSymbols(
    std::vector<std::string> names,
    const std::vector<std::vector<int>>& columns,
    std::vector<int> min_alphabet) {
  if (names.size() != columns.size() || names.empty()) {
    throw InputError("one symbol column per axis name is required");
  }
  const std::size_t n = columns.front().size();
  std::vector<TableAxis> axes;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].size() != n) throw InputError("symbol columns differ in length");
    int size = k < min_alphabet.size() ? min_alphabet[k] : 0;
    for (int s : columns[k]) {
      if (s < 0) throw InputError("symbols must be non-negative");
      size = std::max(size, s + 1);
    }
    size = std::max(size, 1);
    TableAxis axis{std::move(names[k]), {}};
    for (int s = 0; s < size; ++s) axis.labels.push_back(std::to_string(s));
    axes.push_back(std::move(axis));
  }
  std::size_t cells = 1;
  for (const auto& axis : axes) cells *= axis.labels.size();
  std::vector<double> masses(cells, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < columns.size(); ++k) {
      flat = flat * axes[k].labels.size() + columns[k][i];
    }
    masses[flat] += 1.0;
  }
  return ContingencyTable(std::move(axes), std::move(masses));
}

std::size_t ContingencyTable::AxisIndex(std::string_view name) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (axes_[k].name == name) return k;
  }
  throw InputError("unknown axis '" + std::string(name) + "'");
}

double ContingencyTable::at(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw InputError("index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= axes_[k].labels.size()) throw InputError("index out of range");
    flat += index[k] * strides_[k];
  }
  return masses_[flat];
}

ContingencyTable ContingencyTable::Marginal(
    const std::vector<std::string>& keep) const {
  std::vector<std::size_t> src_axes;
  std::vector<TableAxis> out_axes;
  for (const auto& name : keep) {
    const std::size_t k = AxisIndex(name);
    if (std::find(src_axes.begin(), src_axes.end(), k) != src_axes.end()) {
      throw InputError("axis '" + name + "' listed twice");
    }
    src_axes.push_back(k);
    out_axes.push_back(axes_[k]);
  }
  std::vector<std::size_t> out_strides(out_axes.size(), 1);
  for (std::size_t k = out_axes.size(); k-- > 1;) {
    out_strides[k - 1] = out_strides[k] * out_axes[k].labels.size();
  }
  std::size_t out_cells = 1;
  for (const auto& axis : out_axes) out_cells *= axis.labels.size();
  std::vector<double> out(out_cells, 0.0);
  for (std::size_t flat = 0; flat < masses_.size(); ++flat) {
    if (masses_[flat] == 0.0) continue;
    std::size_t target = 0;
    for (std::size_t j = 0; j < src_axes.size(); ++j) {
      const std::size_t k = src_axes[j];
      const std::size_t coord = (flat / strides_[k]) % axes_[k].labels.size();
      target += coord * out_strides[j];
    }
    out[target] += masses_[flat];
  }
  return ContingencyTable(std::move(out_axes), std::move(out));
}

ContingencyTable ContingencyTable::Transposed(std::string_view first,
                                              std::string_view second) const {
  std::vector<std::string> order;
  for (const auto& axis : axes_) order.push_back(axis.name);
  const std::size_t i = AxisIndex(first);
  const std::size_t j = AxisIndex(second);
  std::swap(order[i], order[j]);
  return Marginal(order);
}

// ---------------------------------------------------------------------------
// Information measures

namespace {

double PlugInEntropy(const std::vector<double>& masses, double total,
                     bool miller_madow) {
  if (total <= 0.0) throw InputError("empty distribution");
  double h = 0.0;
  int occupied = 0;
  for (double m : masses) {
    if (m <= 0.0) continue;
    ++occupied;
    const double p = m / total;
    h -= p * std::log2(p);
  }
  h = std::max(0.0, h);
  if (miller_madow) {
    h += (occupied - 1) / (2.0 * total * std::log(2.0));
  }
  return h;
}

double ClampDifference(double value, bool allow_negative_bias,
                       const char* what) {
  if (value >= 0.0) return value;
  if (allow_negative_bias || value > -kNegativeClampTolerance) return 0.0;
  throw NumericalError(std::string(what) + " is negative beyond rounding: " +
                       std::to_string(value));
}

}  // namespace

double Entropy(const ContingencyTable& table, bool miller_madow) {
  return PlugInEntropy(table.masses(), table.total(), miller_madow);
}

double MutualInformation(const ContingencyTable& table, std::string_view axis_x,
                         std::string_view axis_y, bool miller_madow) {
  if (axis_x == axis_y) throw InputError("mutual information needs two axes");
  const std::string x(axis_x), y(axis_y);
  const ContingencyTable joint = table.Marginal({x, y});
  const double hx = Entropy(joint.Marginal({x}), miller_madow);
  const double hy = Entropy(joint.Marginal({y}), miller_madow);
  const double hxy = Entropy(joint, miller_madow);
  return ClampDifference(hx + hy - hxy, miller_madow, "mutual information");
}

double ConditionalEntropy(const ContingencyTable& table,
                          std::string_view target_axis,
                          std::string_view given_axis, bool miller_madow) {
  if (target_axis == given_axis) {
    throw InputError("conditional entropy needs two distinct axes");
  }
  const std::string t(target_axis), g(given_axis);
  const ContingencyTable joint = table.Marginal({t, g});
  const double h_joint = Entropy(joint, miller_madow);
  const double h_given = Entropy(joint.Marginal({g}), miller_madow);
  return ClampDifference(h_joint - h_given, miller_madow,
                         "conditional entropy");
}

double DeltaConditional(const ContingencyTable& table,
                        std::string_view target_axis,
                        std::string_view given_axis) {
  const ContingencyTable joint =
      table.Marginal({std::string(target_axis), std::string(given_axis)});
  if (joint.axis_size(0) != 2 || joint.axis_size(1) != 2) {
    throw InputError("delta requires binary axes");
  }
  // masses laid out as [t][g]
  const auto& m = joint.masses();
  const double n_g0 = m[0] + m[2];
  const double n_g1 = m[1] + m[3];
  if (n_g0 <= 0.0 || n_g1 <= 0.0) {
    throw NumericalError("undefined conditional: a conditioning group is empty");
  }
  return std::abs(m[2] / n_g0 - m[3] / n_g1);
}

// ---------------------------------------------------------------------------
// Representation samples

void RepresentationSample::Validate() const {
  const Eigen::Index n = z.rows();
  if (n < 1) throw InputError("representation sample is empty");
  if (y.size() != n || a.size() != n) {
    throw InputError("z, y and a must have the same number of rows");
  }
  if (!z.allFinite() || !y.allFinite() || !a.allFinite()) {
    throw InputError("representation sample contains non-finite values");
  }
  if (kind == TaskKind::kClassification) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((y(i) != 0.0 && y(i) != 1.0) || (a(i) != 0.0 && a(i) != 1.0)) {
        throw InputError("classification samples require y, a in {0, 1}");
      }
    }
  }
}

std::vector<int> RowSymbols(const Eigen::MatrixXd& z) {
  std::map<std::vector<double>, int> ids;
  std::vector<std::vector<double>> rows(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    rows[i].resize(z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) rows[i][j] = z(i, j);
    ids.emplace(rows[i], 0);
  }
  int next = 0;
  for (auto& [row, id] : ids) id = next++;
  std::vector<int> out(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) out[i] = ids.at(rows[i]);
  return out;
}

namespace {

int CountDistinct(const Eigen::VectorXd& column) {
  std::vector<double> values(column.data(), column.data() + column.size());
  std::sort(values.begin(), values.end());
  return static_cast<int>(std::unique(values.begin(), values.end()) -
                          values.begin());
}

struct ColumnSplit {
  std::vector<Eigen::Index> exact;
  std::vector<Eigen::Index> continuous;
};

ColumnSplit SplitColumns(const Eigen::MatrixXd& z) {
  ColumnSplit split;
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    if (CountDistinct(z.col(j)) <= kDiscreteColumnMaxLevels) {
      split.exact.push_back(j);
    } else {
      split.continuous.push_back(j);
    }
  }
  return split;
}

Eigen::MatrixXd SelectColumns(const Eigen::MatrixXd& z,
                              const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(z.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(j) = z.col(cols[j]);
  return out;
}

// Rows grouped by the exact (low-cardinality) columns.
std::vector<std::vector<Eigen::Index>> Strata(const Eigen::MatrixXd& z,
                                              const ColumnSplit& split) {
  std::vector<int> ids(z.rows(), 0);
  if (!split.exact.empty()) ids = RowSymbols(SelectColumns(z, split.exact));
  const int count =
      ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<std::vector<Eigen::Index>> strata(count);
  for (Eigen::Index i = 0; i < z.rows(); ++i) strata[ids[i]].push_back(i);
  return strata;
}

// Equal-frequency bins; tied values always share a bin.
std::vector<int> EqualFrequencyBins(const Eigen::VectorXd& values, int bins) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return values(l) < values(r);
  });
  std::vector<int> out(n, 0);
  Eigen::Index run_start = 0;
  for (Eigen::Index p = 0; p < n; ++p) {
    if (p > 0 && values(order[p]) != values(order[p - 1])) run_start = p;
    out[order[p]] = static_cast<int>((run_start * bins) / n);
  }
  return out;
}

int DefaultBins(Eigen::Index n, const EstimatorConfig& config) {
  if (config.discretization_bins > 0) return config.discretization_bins;
  return std::max(1, static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-9)));
}

// Cells for the continuous part of one stratum: equal-frequency bins on one
// coordinate, or a product grid over the top two principal coordinates, at
// most kExactSymbolMaxCells cells either way.
std::vector<int> QuantizeContinuous(const Eigen::MatrixXd& x,
                                    const EstimatorConfig& config) {
  const Eigen::Index n = x.rows();
  const int bins = DefaultBins(n, config);
  if (x.cols() == 1) {
    return EqualFrequencyBins(x.col(0), std::min(bins, kExactSymbolMaxCells));
  }
  const int per_axis = std::min(bins, 8);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n);
  const SymmetricSpectrum spectrum = SortedSpectrum(cov);
  const Eigen::MatrixXd projected = centered * spectrum.vectors.leftCols(2);
  const std::vector<int> first = EqualFrequencyBins(projected.col(0), per_axis);
  const std::vector<int> second = EqualFrequencyBins(projected.col(1), per_axis);
  std::vector<int> out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = first[i] * per_axis + second[i];
  return out;
}

// Renumbers arbitrary non-negative keys densely in ascending key order.
std::vector<int> Densify(const std::vector<long long>& keys) {
  std::vector<long long> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
  }
  return out;
}

double PopulationVariance(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

// kNN conditional means for every row; identical rows share one query.
std::vector<double> KnnConditionalMeans(const Eigen::MatrixXd& z,
                                        std::span<const double> values, int k) {
  const Eigen::Index n = z.rows();
  std::vector<double> means(n, 0.0);
  if (n == 0) return means;
  if (k >= n || z.cols() == 0) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    std::fill(means.begin(), means.end(), mean);
    return means;
  }
  const KdTree tree(z);
  const std::vector<int> symbols = RowSymbols(z);
  const int distinct = *std::max_element(symbols.begin(), symbols.end()) + 1;
  std::vector<double> memo(distinct, 0.0);
  std::vector<char> done(distinct, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int s = symbols[i];
    if (!done[s]) {
      const Eigen::VectorXd query = z.row(i).transpose();
      const std::vector<int> nearest = tree.Nearest(query, k);
      const double radius_sq = tree.SquaredDistance(query, nearest.back());
      const std::vector<int> ball = tree.WithinRadius(query, radius_sq);
      double sum = 0.0;
      for (int j : ball) sum += values[j];
      memo[s] = sum / static_cast<double>(ball.size());
      done[s] = 1;
    }
    means[i] = memo[s];
  }
  return means;
}

}  // namespace

std::vector<int> DiscretizeRepresentation(const Eigen::MatrixXd& z,
                                          const EstimatorConfig& config) {
  const Eigen::Index n = z.rows();
  if (n == 0) return {};
  if (z.cols() == 0) return std::vector<int>(n, 0);
  std::vector<int> exact = RowSymbols(z);
  if (*std::max_element(exact.begin(), exact.end()) + 1 <= kExactSymbolMaxCells) {
    return exact;
  }
  const ColumnSplit split = SplitColumns(z);
  if (split.continuous.empty()) return exact;
  const Eigen::MatrixXd continuous = SelectColumns(z, split.continuous);
  std::vector<long long> keys(n, 0);
  const auto strata = Strata(z, split);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const auto& rows = strata[s];
    Eigen::MatrixXd part(static_cast<Eigen::Index>(rows.size()), continuous.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) part.row(r) = continuous.row(rows[r]);
    const std::vector<int> cells = QuantizeContinuous(part, config);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      keys[rows[r]] = static_cast<long long>(s) * kExactSymbolMaxCells + cells[r];
    }
  }
  return Densify(keys);
}

double GroupedConditionalMeanVariance(std::span<const int> groups,
                                      std::span<const double> values,
                                      std::span<const double> weights) {
  if (groups.size() != values.size() ||
      (!weights.empty() && weights.size() != values.size())) {
    throw InputError("group, value and weight lengths differ");
  }
  if (values.empty()) throw InputError("no rows to condition on");
  int count = 0;
  for (int g : groups) {
    if (g < 0) throw InputError("group ids must be non-negative");
    count = std::max(count, g + 1);
  }
  std::vector<double> group_weight(count, 0.0), group_sum(count, 0.0);
  double total_weight = 0.0, total_sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w >= 0.0)) throw InputError("weights must be non-negative");
    group_weight[groups[i]] += w;
    group_sum[groups[i]] += w * values[i];
    total_weight += w;
    total_sum += w * values[i];
  }
  if (total_weight <= 0.0) throw InputError("total weight is zero");
  const double mean = total_sum / total_weight;
  double acc = 0.0;
  for (int g = 0; g < count; ++g) {
    if (group_weight[g] <= 0.0) continue;
    const double dev = group_sum[g] / group_weight[g] - mean;
    acc += group_weight[g] * dev * dev;
  }
  return acc / total_weight;
}

double KnnConditionalMeanVariance(const Eigen::MatrixXd& z,
                                  std::span<const double> values, int k) {
  if (static_cast<Eigen::Index>(values.size()) != z.rows()) {
    throw InputError("value count does not match representation rows");
  }
  if (k < 1) throw InputError("k must be positive");
  if (k >= z.rows()) throw InputError("k must be smaller than N");
  return PopulationVariance(KnnConditionalMeans(z, values, k));
}

double ConditionalMeanVariance(const RepresentationSample& sample,
                               ConditionalTarget target,
                               const EstimatorConfig& config) {
  sample.Validate();
  const Eigen::Index n = sample.size();
  if (n < 2) throw InputError("conditional mean variance needs N >= 2");
  const Eigen::VectorXd& v = target == ConditionalTarget::kY ? sample.y : sample.a;
  const std::span<const double> values(v.data(), static_cast<std::size_t>(n));

  const std::vector<int> symbols = RowSymbols(sample.z);
  const int distinct =
      symbols.empty() ? 0 : *std::max_element(symbols.begin(), symbols.end()) + 1;
  const bool group_by =
      config.path == ConditionalMeanPath::kGroupBy ||
      (config.path == ConditionalMeanPath::kAuto && distinct <= kGroupByMaxDistinct);
  if (group_by) return GroupedConditionalMeanVariance(symbols, values);

  const int k = config.knn_k > 0
                    ? config.knn_k
                    : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  if (k >= n) throw InputError("k must be smaller than N");

  const ColumnSplit split = SplitColumns(sample.z);
  const Eigen::MatrixXd continuous = SelectColumns(sample.z, split.continuous);
  std::vector<double> means(n, 0.0);
  for (const auto& rows : Strata(sample.z, split)) {
    Eigen::MatrixXd part(static_cast<Eigen::Index>(rows.size()), continuous.cols());
    std::vector<double> part_values(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      part.row(r) = continuous.row(rows[r]);
      part_values[r] = values[rows[r]];
    }
    const std::vector<double> part_means = KnnConditionalMeans(part, part_values, k);
    for (std::size_t r = 0; r < rows.size(); ++r) means[rows[r]] = part_means[r];
  }
  return PopulationVariance(means);
}

double ConditionalMeanVariance(const LinearGaussianConditioning& model) {
  const Eigen::Index d = model.sigma.rows();
  if (model.sigma.cols() != d || model.linear_map.cols() != d ||
      model.coefficients.size() != d) {
    throw InputError("linear-Gaussian shapes are inconsistent");
  }
  const Eigen::MatrixXd v = ConditionalMeanCovariance(model.sigma, model.linear_map);
  return std::max(0.0, model.coefficients.dot(v * model.coefficients));
}

ContingencyTable ClassificationJoint(const RepresentationSample& sample,
                                     const EstimatorConfig& config) {
  sample.Validate();
  if (sample.kind != TaskKind::kClassification) {
    throw InputError("classification joint requires a classification sample");
  }
  const Eigen::Index n = sample.size();
  std::vector<int> y(n), a(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = static_cast<int>(sample.y(i));
    a[i] = static_cast<int>(sample.a(i));
  }
  return ContingencyTable::FromSymbols(
      {"y", "a", "z"}, {y, a, DiscretizeRepresentation(sample.z, config)},
      {2, 2, 1});
}

PlanePoint EstimatePlanePoint(const RepresentationSample& sample,
                              const EstimatorConfig& config) {
  PlanePoint p;
  p.kind = sample.kind;
  if (sample.kind == TaskKind::kClassification) {
    const ContingencyTable joint = ClassificationJoint(sample, config);
    p.utility = MutualInformation(joint, "y", "z", config.miller_madow);
    p.leakage = MutualInformation(joint, "a", "z", config.miller_madow);
  } else {
    p.utility = ConditionalMeanVariance(sample, ConditionalTarget::kY, config);
    p.leakage = ConditionalMeanVariance(sample, ConditionalTarget::kA, config);
  }
  p.utility = std::max(0.0, p.utility);
  p.leakage = std::max(0.0, p.leakage);
  return p;
}

}  // namespace infoplane
