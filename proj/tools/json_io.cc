#include "json_io.h"

#include <fstream>

#include "infoplane/error.h"

namespace infoplane::cli {

json PointJson(const PlanePoint& p) {
  return {{"utility", p.utility}, {"leakage", p.leakage}};
}

json ClassificationPlaneJson(const ClassificationPlane& plane) {
  return {{"kind", "classification"},
          {"h_y", plane.h_y},
          {"h_a", plane.h_a},
          {"delta_y_given_a", plane.delta_y_given_a},
          {"delta_a_given_y", plane.delta_a_given_y},
          {"i_ay", plane.i_ay}};
}

json RegressionPlaneJson(const RegressionPlane& plane) {
  return {{"kind", "regression"},
          {"var_y", plane.var_y},
          {"var_a", plane.var_a},
          {"cov_ya", plane.cov_ya},
          {"rho_squared", plane.RhoSquared()},
          {"noisy", plane.noisy}};
}

json MatrixJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorJson(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json RepresentationJson(const ConstructedRepresentation& rep) {
  json components = json::array();
  for (const auto& c : rep.components) {
    components.push_back({{"weight", c.weight}, {"linear_map", MatrixJson(c.linear_map)}});
  }
  json out = {{"kind", rep.randomized() ? "randomized-mixture" : "deterministic"},
              {"components", std::move(components)}};
  if (!rep.proof_weights.empty() || rep.scale != 0.0) {
    out["scale"] = rep.scale;
    out["proof_weights"] = rep.proof_weights;
  }
  return out;
}

namespace {

double Number(const json& v) {
  if (!v.is_number()) throw InputError("expected a number in JSON input");
  return v.get<double>();
}

}  // namespace

Eigen::MatrixXd MatrixFromJson(const json& value, Eigen::Index rows, Eigen::Index cols) {
  if (!value.is_array()) throw InputError("matrix must be a JSON array");
  Eigen::MatrixXd m(rows, cols);
  if (!value.empty() && value.front().is_array()) {
    if (static_cast<Eigen::Index>(value.size()) != rows) throw InputError("matrix row count mismatch");
    for (Eigen::Index i = 0; i < rows; ++i) {
      const json& row = value[i];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw InputError("matrix column count mismatch");
      }
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Number(row[j]);
    }
    return m;
  }
  if (static_cast<Eigen::Index>(value.size()) != rows * cols) {
    throw InputError("flat matrix must have rows * cols entries");
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Number(value[i * cols + j]);
  }
  return m;
}

Eigen::VectorXd VectorFromJson(const json& value, Eigen::Index size) {
  if (!value.is_array() || static_cast<Eigen::Index>(value.size()) != size) {
    throw InputError("vector must be a JSON array of length dim");
  }
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = Number(value[i]);
  return v;
}

GaussianModel ModelFromJson(const json& value) {
  if (!value.is_object() || !value.contains("dim")) throw InputError("model JSON needs 'dim'");
  const json& dim_json = value.at("dim");
  if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1) {
    throw InputError("'dim' must be a positive integer");
  }
  const auto d = static_cast<Eigen::Index>(dim_json.get<long long>());
  for (const char* key : {"sigma", "a", "y"}) {
    if (!value.contains(key)) throw InputError(std::string("model JSON needs '") + key + "'");
  }
  GaussianModel model;
  model.sigma = MatrixFromJson(value.at("sigma"), d, d);
  model.a = VectorFromJson(value.at("a"), d);
  model.y = VectorFromJson(value.at("y"), d);
  model.mean = value.contains("mean") ? VectorFromJson(value.at("mean"), d)
                                      : Eigen::VectorXd::Zero(d);
  model.Validate();
  return model;
}

json ModelJson(const GaussianModel& model) {
  return {{"dim", model.dim()},
          {"mean", VectorJson(model.mean)},
          {"sigma", MatrixJson(model.sigma)},
          {"a", VectorJson(model.a)},
          {"y", VectorJson(model.y)}};
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace infoplane::cli
