#include "infoplane/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "infoplane/error.h"
#include "infoplane/linalg.h"
#include "infoplane/random.h"

namespace infoplane {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool ParseDouble(std::string_view text, double* out) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(*out);
}

std::string Where(std::size_t line, const std::string& column) {
  return "line " + std::to_string(line) + ", column '" + column + "'";
}

}  // namespace

const Column& TabularDataset::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw InputError("missing column '" + name + "'");
}

Eigen::VectorXd TabularDataset::Values(const std::string& name) const {
  const Column& c = column(name);
  return Eigen::Map<const Eigen::VectorXd>(c.values.data(),
                                           static_cast<Eigen::Index>(c.values.size()));
}

void TabularDataset::Validate() const {
  const std::size_t n = rows();
  for (const auto& c : columns) {
    if (c.values.size() != n) throw InputError("column '" + c.name + "' has wrong length");
    if (c.type == ColumnType::kDiscrete) {
      for (double v : c.values) {
        if (v < 0 || v >= static_cast<double>(c.alphabet.size()) || v != std::floor(v)) {
          throw InputError("column '" + c.name + "' holds a value outside its alphabet");
        }
      }
    }
  }
  for (const auto* role : {&target, &attribute}) {
    if (role->empty()) continue;
    if (column(*role).type != ColumnType::kContinuous) {
      throw InputError("role column '" + *role + "' must be numeric");
    }
  }
  for (const auto& f : features) {
    column(f);
    if (f == target || f == attribute) {
      throw InputError("role column '" + f + "' listed as a feature");
    }
  }
}

TabularDataset TabularDataset::Take(const std::vector<std::size_t>& rows) const {
  TabularDataset out = *this;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.columns[k].values.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.columns[k].values[i] = columns[k].values.at(rows[i]);
    }
  }
  return out;
}

std::vector<std::vector<std::string>> ReadCsvRecords(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false, field_started = false, any = false;
  char ch;
  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      end_record();
    } else if (ch == '\r') {
      if (in.peek() == '\n') continue;
      end_record();
    } else {
      field.push_back(ch);
      field_started = true;
    }
  }
  if (in_quotes) throw InputError("unterminated quoted field");
  if (any && (!field.empty() || !record.empty())) end_record();
  return records;
}

TabularDataset ParseCsv(std::istream& in, const DatasetSchema& schema) {
  const auto records = ReadCsvRecords(in);
  if (records.empty()) throw InputError("CSV has no header");
  const auto& header = records.front();
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < header.size(); ++k) {
    const std::string name(Trim(header[k]));
    if (!index.emplace(name, k).second) throw InputError("duplicate column '" + name + "'");
  }
  const auto require = [&](const std::string& name) {
    if (!index.count(name)) throw InputError("missing column '" + name + "'");
  };
  if (schema.target.empty()) throw InputError("a target column is required");
  require(schema.target);
  if (!schema.attribute.empty()) require(schema.attribute);

  std::vector<std::string> features = schema.features;
  if (features.empty()) {
    for (const auto& name : header) {
      const std::string n(Trim(name));
      if (n != schema.target && n != schema.attribute) features.push_back(n);
    }
  }
  for (const auto& f : features) require(f);
  const std::set<std::string> categorical(schema.categorical.begin(),
                                          schema.categorical.end());
  for (const auto& c : categorical) {
    if (std::find(features.begin(), features.end(), c) == features.end()) {
      throw InputError("categorical column '" + c + "' is not a feature");
    }
  }

  TabularDataset ds;
  ds.target = schema.target;
  ds.attribute = schema.attribute;
  ds.features = features;
  std::vector<std::string> names = {schema.target};
  if (!schema.attribute.empty()) names.push_back(schema.attribute);
  names.insert(names.end(), features.begin(), features.end());
  for (const auto& name : names) {
    Column c;
    c.name = name;
    c.type = categorical.count(name) ? ColumnType::kDiscrete : ColumnType::kContinuous;
    ds.columns.push_back(std::move(c));
  }
  std::vector<std::map<std::string, int>> level_index(ds.columns.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw InputError("line " + std::to_string(r + 1) + " has " +
                       std::to_string(rec.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (std::size_t k = 0; k < ds.columns.size(); ++k) {
      Column& c = ds.columns[k];
      const std::string_view cell = Trim(rec[index[c.name]]);
      if (c.type == ColumnType::kContinuous) {
        double v;
        if (!ParseDouble(cell, &v)) {
          throw InputError("non-numeric value '" + std::string(cell) + "' at " +
                           Where(r + 1, c.name));
        }
        c.values.push_back(v);
      } else {
        if (cell.empty()) throw InputError("empty categorical value at " + Where(r + 1, c.name));
        auto [it, inserted] =
            level_index[k].emplace(std::string(cell), static_cast<int>(c.alphabet.size()));
        if (inserted) c.alphabet.emplace_back(cell);
        c.values.push_back(it->second);
      }
    }
  }
  ds.Validate();
  return ds;
}

TabularDataset LoadCsv(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return ParseCsv(in, schema);
}

std::pair<TabularDataset, TabularDataset> SplitDataset(const TabularDataset& ds,
                                                       double train_frac,
                                                       std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac <= 1.0)) {
    throw InputError("train fraction must lie in (0, 1]");
  }
  const std::size_t n = ds.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  const auto n_train =
      static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n) + 1e-9));
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> test(order.begin() + n_train, order.end());
  return {ds.Take(train), ds.Take(test)};
}

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string QuoteIfNeeded(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void WriteCsv(std::ostream& out, const TabularDataset& ds) {
  for (std::size_t k = 0; k < ds.columns.size(); ++k) {
    out << (k ? "," : "") << QuoteIfNeeded(ds.columns[k].name);
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (std::size_t k = 0; k < ds.columns.size(); ++k) {
      const Column& c = ds.columns[k];
      out << (k ? "," : "");
      if (c.type == ColumnType::kDiscrete) {
        out << QuoteIfNeeded(c.alphabet[static_cast<std::size_t>(c.values[r])]);
      } else {
        out << FormatNumber(c.values[r]);
      }
    }
    out << '\n';
  }
}

FeatureEncoder FeatureEncoder::Fit(const TabularDataset& train) {
  FeatureEncoder enc;
  for (const auto& name : train.features) {
    const Column& c = train.column(name);
    Slot slot{name, c.type == ColumnType::kDiscrete, {}};
    if (slot.categorical) {
      std::set<std::string> seen;
      for (double v : c.values) seen.insert(c.alphabet[static_cast<std::size_t>(v)]);
      slot.levels.assign(seen.begin(), seen.end());
      enc.width_ += static_cast<Eigen::Index>(slot.levels.size());
    } else {
      enc.width_ += 1;
    }
    enc.slots_.push_back(std::move(slot));
  }
  return enc;
}

Eigen::MatrixXd FeatureEncoder::Transform(const TabularDataset& ds,
                                          std::vector<std::string>* warnings) const {
  const auto n = static_cast<Eigen::Index>(ds.rows());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, width_);
  Eigen::Index offset = 0;
  for (const auto& slot : slots_) {
    const Column& c = ds.column(slot.name);
    if (!slot.categorical) {
      if (c.type != ColumnType::kContinuous) {
        throw InputError("column '" + slot.name + "' changed type");
      }
      for (Eigen::Index i = 0; i < n; ++i) x(i, offset) = c.values[i];
      offset += 1;
      continue;
    }
    std::set<std::string> unseen;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string& level = c.alphabet[static_cast<std::size_t>(c.values[i])];
      const auto it = std::lower_bound(slot.levels.begin(), slot.levels.end(), level);
      if (it != slot.levels.end() && *it == level) {
        x(i, offset + (it - slot.levels.begin())) = 1.0;
      } else {
        unseen.insert(level);
      }
    }
    if (warnings) {
      for (const auto& level : unseen) {
        warnings->push_back("column '" + slot.name + "': level '" + level +
                            "' unseen in training data, encoded as all zeros");
      }
    }
    offset += static_cast<Eigen::Index>(slot.levels.size());
  }
  return x;
}

RepresentationFile ReadRepresentationCsv(std::istream& in, TaskKind kind) {
  const auto records = ReadCsvRecords(in);
  if (records.empty()) throw InputError("representation CSV has no header");
  const auto& header = records.front();
  const std::size_t width = header.size();
  if (width < 3 || Trim(header[0]) != "row_id" || Trim(header[width - 2]) != "y" ||
      Trim(header[width - 1]) != "a") {
    throw InputError("representation header must be row_id,z_0,...,z_{d-1},y,a");
  }
  const std::size_t d = width - 3;
  for (std::size_t j = 0; j < d; ++j) {
    if (Trim(header[j + 1]) != "z_" + std::to_string(j)) {
      throw InputError("representation header must be row_id,z_0,...,z_{d-1},y,a");
    }
  }
  const auto n = static_cast<Eigen::Index>(records.size() - 1);
  RepresentationFile file;
  file.sample.kind = kind;
  file.sample.z.resize(n, static_cast<Eigen::Index>(d));
  file.sample.y.resize(n);
  file.sample.a.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& rec = records[i + 1];
    const std::size_t line = static_cast<std::size_t>(i) + 2;
    if (rec.size() != width) {
      throw InputError("line " + std::to_string(line) + " has the wrong field count");
    }
    std::int64_t id = 0;
    const std::string_view id_text = Trim(rec[0]);
    const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc() || ptr != id_text.data() + id_text.size()) {
      throw InputError("row_id is not an integer at line " + std::to_string(line));
    }
    if (!file.row_ids.empty() && id <= file.row_ids.back()) {
      throw InputError("row_id must be strictly increasing at line " + std::to_string(line));
    }
    file.row_ids.push_back(id);
    const auto cell = [&](std::size_t k) {
      double v;
      if (!ParseDouble(rec[k], &v)) {
        throw InputError("non-numeric value at " + Where(line, std::string(Trim(header[k]))));
      }
      return v;
    };
    for (std::size_t j = 0; j < d; ++j) file.sample.z(i, static_cast<Eigen::Index>(j)) = cell(j + 1);
    file.sample.y(i) = cell(width - 2);
    file.sample.a(i) = cell(width - 1);
  }
  if (n < 1) throw InputError("representation CSV has no rows");
  file.sample.Validate();
  return file;
}

RepresentationFile LoadRepresentationCsv(const std::string& path, TaskKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return ReadRepresentationCsv(in, kind);
}

void WriteRepresentationCsv(std::ostream& out, const RepresentationSample& sample,
                            const std::vector<std::int64_t>& row_ids) {
  const Eigen::Index n = sample.size();
  if (!row_ids.empty() && static_cast<Eigen::Index>(row_ids.size()) != n) {
    throw InputError("row id count does not match the sample");
  }
  out << "row_id";
  for (Eigen::Index j = 0; j < sample.z.cols(); ++j) out << ",z_" << j;
  out << ",y,a\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    out << (row_ids.empty() ? static_cast<std::int64_t>(i) : row_ids[i]);
    for (Eigen::Index j = 0; j < sample.z.cols(); ++j) out << ',' << FormatNumber(sample.z(i, j));
    out << ',' << FormatNumber(sample.y(i)) << ',' << FormatNumber(sample.a(i)) << '\n';
  }
}

TabularDataset SynthBernoulliPair(double p_a, double p_y_given_a0,
                                  double p_y_given_a1, std::int64_t n,
                                  std::uint64_t seed) {
  for (double p : {p_a, p_y_given_a0, p_y_given_a1}) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("probabilities must lie in [0, 1]");
  }
  if (n < 1) throw InputError("n must be at least 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TabularDataset ds;
  ds.target = "y";
  ds.attribute = "a";
  ds.features = {"x_y", "x_a", "x_noise"};
  for (const char* name : {"y", "a", "x_y", "x_a", "x_noise"}) {
    ds.columns.push_back({name, ColumnType::kContinuous, {}, {}});
  }
  for (auto& c : ds.columns) c.values.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const int a = OpenUniform(rng) < p_a ? 0 : 1;
    const double p_y = a == 0 ? p_y_given_a0 : p_y_given_a1;
    const int y = OpenUniform(rng) < p_y ? 1 : 0;
    ds.columns[0].values.push_back(y);
    ds.columns[1].values.push_back(a);
    ds.columns[2].values.push_back(y);
    ds.columns[3].values.push_back(a);
    ds.columns[4].values.push_back(normal(rng));
  }
  return ds;
}

TabularDataset SynthGaussian(const GaussianModel& model, std::int64_t n,
                             std::uint64_t seed) {
  model.Validate();
  if (n < 1) throw InputError("n must be at least 1");
  const Eigen::Index d = model.dim();
  const Eigen::MatrixXd half = PsdRoot(model.sigma).half;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TabularDataset ds;
  ds.target = "y";
  ds.attribute = "a";
  ds.columns.push_back({"y", ColumnType::kContinuous, {}, {}});
  ds.columns.push_back({"a", ColumnType::kContinuous, {}, {}});
  for (Eigen::Index k = 0; k < d; ++k) {
    ds.features.push_back("phi_" + std::to_string(k));
    ds.columns.push_back({ds.features.back(), ColumnType::kContinuous, {}, {}});
  }
  Eigen::VectorXd xi(d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) xi(k) = normal(rng);
    const Eigen::VectorXd phi = model.mean + half * xi;
    ds.columns[0].values.push_back(model.y.dot(phi));
    ds.columns[1].values.push_back(model.a.dot(phi));
    for (Eigen::Index k = 0; k < d; ++k) ds.columns[2 + k].values.push_back(phi(k));
  }
  return ds;
}

}  // namespace infoplane
