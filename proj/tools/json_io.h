#pragma once

#include <Eigen/Dense>
#include <string>

#include "infoplane/classification_plane.h"
#include "infoplane/gaussian_oracle.h"
#include "infoplane/regression_plane.h"
#include "json.hpp"

namespace infoplane::cli {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "infoplane.report/v1";

json PointJson(const PlanePoint& p);
json ClassificationPlaneJson(const ClassificationPlane& plane);
json RegressionPlaneJson(const RegressionPlane& plane);
json MatrixJson(const Eigen::MatrixXd& m);  // row-major nested arrays
json VectorJson(const Eigen::VectorXd& v);
json RepresentationJson(const ConstructedRepresentation& rep);

// Accepts nested rows or a flat row-major array of length rows * cols.
Eigen::MatrixXd MatrixFromJson(const json& value, Eigen::Index rows, Eigen::Index cols);
Eigen::VectorXd VectorFromJson(const json& value, Eigen::Index size);

// {"dim": d, "mean": [...], "sigma": [...], "a": [...], "y": [...]}; mean
// defaults to zeros.
GaussianModel ModelFromJson(const json& value);
json ModelJson(const GaussianModel& model);

json ReadJsonFile(const std::string& path);

}  // namespace infoplane::cli
