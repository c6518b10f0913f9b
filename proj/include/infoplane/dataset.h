#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "infoplane/gaussian_oracle.h"
#include "infoplane/metrics.h"

namespace infoplane {

enum class ColumnType { kDiscrete, kContinuous };

struct Column {
  std::string name;
  ColumnType type = ColumnType::kContinuous;
  std::vector<std::string> alphabet;  // discrete only, in first-seen order
  std::vector<double> values;         // level index (discrete) or value
};

// Role columns are always numeric; features may be categorical.
struct DatasetSchema {
  std::string target;
  std::string attribute;
  std::vector<std::string> features;     // empty: every non-role column
  std::vector<std::string> categorical;  // subset of features
};

struct TabularDataset {
  std::vector<Column> columns;
  std::string target;
  std::string attribute;
  std::vector<std::string> features;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().values.size(); }
  const Column& column(const std::string& name) const;
  Eigen::VectorXd Values(const std::string& name) const;
  void Validate() const;
  // Subset of rows in the given order.
  TabularDataset Take(const std::vector<std::size_t>& rows) const;
};

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerated.
std::vector<std::vector<std::string>> ReadCsvRecords(std::istream& in);

TabularDataset LoadCsv(const std::string& path, const DatasetSchema& schema);
TabularDataset ParseCsv(std::istream& in, const DatasetSchema& schema);

// Fisher-Yates shuffle, then the first floor(train_frac * N) rows train.
std::pair<TabularDataset, TabularDataset> SplitDataset(const TabularDataset& ds,
                                                       double train_frac,
                                                       std::uint64_t seed);

// Numbers are written with %.17g so they read back bit-identically.
void WriteCsv(std::ostream& out, const TabularDataset& ds);
std::string FormatNumber(double v);

// One-hot levels are taken from the data the encoder is fitted on; unseen
// levels encode as all zeros and produce a warning.
class FeatureEncoder {
 public:
  static FeatureEncoder Fit(const TabularDataset& train);
  Eigen::MatrixXd Transform(const TabularDataset& ds,
                            std::vector<std::string>* warnings = nullptr) const;
  Eigen::Index width() const { return width_; }

 private:
  struct Slot {
    std::string name;
    bool categorical = false;
    std::vector<std::string> levels;
  };
  std::vector<Slot> slots_;
  Eigen::Index width_ = 0;
};

// Representation CSV: header row_id,z_0,...,z_{d-1},y,a.
struct RepresentationFile {
  std::vector<std::int64_t> row_ids;
  RepresentationSample sample;
};
RepresentationFile ReadRepresentationCsv(std::istream& in, TaskKind kind);
RepresentationFile LoadRepresentationCsv(const std::string& path, TaskKind kind);
void WriteRepresentationCsv(std::ostream& out, const RepresentationSample& sample,
                            const std::vector<std::int64_t>& row_ids = {});

// Columns x_y, x_a, x_noise (features) and y, a, with Pr(A = 0) = p_a.
TabularDataset SynthBernoulliPair(double p_a, double p_y_given_a0,
                                  double p_y_given_a1, std::int64_t n,
                                  std::uint64_t seed);

// Columns phi_0..phi_{d-1} (features), y = <y, phi>, a = <a, phi>.
TabularDataset SynthGaussian(const GaussianModel& model, std::int64_t n,
                             std::uint64_t seed);

}  // namespace infoplane
