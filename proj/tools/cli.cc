#include "cli.h"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "infoplane/baselines.h"
#include "infoplane/classification_plane.h"
#include "infoplane/dataset.h"
#include "infoplane/error.h"
#include "infoplane/gaussian_oracle.h"
#include "infoplane/mixer.h"
#include "infoplane/regression_plane.h"
#include "json_io.h"
#include "plot.h"

namespace infoplane::cli {

namespace {

struct Options {
  std::string task;
  std::string dataset;
  std::string target_col = "y";
  std::string attribute_col = "a";
  std::vector<std::string> feature_cols;
  std::vector<std::string> categorical_cols;
  int bins = 0;
  int knn_k = 0;
  bool miller_madow = false;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  int samples = 101;

  // analyze / certify
  std::vector<std::string> reps;
  std::vector<std::string> names;
  double epsilon = 0.05;
  int bootstrap = 1000;

  // frontier plane statistics
  std::optional<double> p_a0, p_y1_a0, p_y1_a1;
  std::optional<double> var_y, var_a, cov;

  // oracle
  std::string model;
  std::string mode;
  std::int64_t mc = 100000;

  // mix
  double u = 0.5;

  // plot
  std::string report;

  // synth
  double alpha = 0.0, beta = 0.0;
  std::int64_t n = 10000;

  // train
  std::string learner = "logit";
  int d_out = 2;
  int epochs = 500;
  double lr = 0.1;
  double train_frac = 0.8;
};

struct Context {
  std::ostream& out;
  std::shared_ptr<spdlog::logger> log;
  std::vector<std::string> warnings;

  void Warn(const std::string& msg) {
    warnings.push_back(msg);
    log->warn(msg);
  }
};

TaskKind RequireTask(const Options& o) {
  if (o.task.empty()) throw InputError("--task is required");
  return ParseTaskKind(o.task);
}

EstimatorConfig Estimator(const Options& o) {
  EstimatorConfig config;
  config.discretization_bins = o.bins;
  config.knn_k = o.knn_k;
  config.miller_madow = o.miller_madow;
  return config;
}

json EstimatorJson(const Options& o, TaskKind task) {
  json e = {{"bins", o.bins}, {"knn_k", o.knn_k}, {"miller_madow", o.miller_madow}};
  if (task == TaskKind::kClassification) {
    e["method"] =
        "plug-in; exact symbols up to 64 distinct rows, else equal-frequency bins "
        "(ceil(N^(1/3)), at most 64 cells, top two principal coordinates when d > 1)";
  } else {
    e["method"] = "group-by up to 1024 distinct rows, else kNN with k = ceil(sqrt(N))";
  }
  e["note"] = "discretization and neighbourhood defaults are this tool's choice";
  return e;
}

json Envelope(const std::string& command, json inputs) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"inputs", std::move(inputs)}};
}

void Emit(Context& ctx, json report) {
  report["warnings"] = ctx.warnings;
  ctx.out << report.dump(2) << '\n';
}

json PairList(const std::vector<PlanePoint>& points) {
  json out = json::array();
  for (const auto& p : points) out.push_back({p.utility, p.leakage});
  return out;
}

std::string Stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  return f;
}

// ---------------------------------------------------------------------------
// Planes

TabularDataset LoadRoles(const Options& o) {
  DatasetSchema schema;
  schema.target = o.target_col;
  schema.attribute = o.attribute_col;
  schema.features = {};
  TabularDataset ds;
  // Only the role columns are needed; features are not parsed.
  std::ifstream in(o.dataset, std::ios::binary);
  if (!in) throw InputError("cannot open '" + o.dataset + "'");
  const auto records = ReadCsvRecords(in);
  if (records.empty()) throw InputError("dataset has no header");
  std::ostringstream subset;
  std::vector<std::size_t> keep;
  for (const std::string& role : {o.target_col, o.attribute_col}) {
    bool found = false;
    for (std::size_t k = 0; k < records[0].size(); ++k) {
      if (records[0][k] == role) {
        keep.push_back(k);
        found = true;
        break;
      }
    }
    if (!found) throw InputError("missing column '" + role + "'");
  }
  for (const auto& rec : records) {
    if (rec.size() != records[0].size()) throw InputError("dataset row has the wrong field count");
    subset << rec[keep[0]] << ',' << rec[keep[1]] << '\n';
  }
  std::istringstream in_subset(subset.str());
  schema.features = {};
  ds = ParseCsv(in_subset, schema);
  if (ds.rows() < 1) throw InputError("dataset has no rows");
  return ds;
}

std::vector<int> BinarySymbols(const Eigen::VectorXd& v, const std::string& what) {
  std::vector<int> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0 && v(i) != 1.0) throw InputError(what + " values must be 0 or 1");
    out[i] = static_cast<int>(v(i));
  }
  return out;
}

ClassificationPlane ClassificationPlaneFromColumns(const Eigen::VectorXd& y,
                                                   const Eigen::VectorXd& a) {
  const ContingencyTable ya = ContingencyTable::FromSymbols(
      {"y", "a"}, {BinarySymbols(y, "target"), BinarySymbols(a, "attribute")}, {2, 2});
  return ClassificationPlane::FromJoint(ya);
}

RegressionPlane RegressionPlaneFromColumns(const Eigen::VectorXd& y,
                                           const Eigen::VectorXd& a) {
  return RegressionPlane::FromSamples(std::span<const double>(y.data(), y.size()),
                                      std::span<const double>(a.data(), a.size()));
}

json ClassificationGeometry(const ClassificationPlane& plane, json* report) {
  const FeasiblePolygon polygon = InnerPolygon(plane);
  (*report)["plane"] = ClassificationPlaneJson(plane);
  (*report)["vertices"] = {{"e_y", VertexEy(plane)},
                           {"e_a", VertexEa(plane)},
                           {"polygon", PairList(polygon.vertices)},
                           {"chord", PairList({polygon.frontier_begin, polygon.frontier_end})}};
  const CostBounds cost = ClassificationCostBounds(plane);
  (*report)["bounds"] = {{"utility_max", plane.h_y},
                         {"leakage_max", plane.h_a},
                         {"invariance_cost_lower", cost.invariance_cost_lower},
                         {"privacy_leak_upper", cost.privacy_leak_upper},
                         {"dg_error_floor", DomainGeneralizationFloor(plane)}};
  (*report)["region"] = PairList(polygon.vertices);
  return PairList({polygon.frontier_begin, polygon.frontier_end});
}

json RegressionGeometry(const RegressionPlane& plane, int samples, json* report) {
  (*report)["plane"] = RegressionPlaneJson(plane);
  (*report)["vertices"] = {{"e_y", VertexEyLs(plane)}, {"e_a", VertexEaLs(plane)}};
  const CostBoundsLs cost = RegressionCostBounds(plane);
  (*report)["bounds"] = {
      {"utility_max", plane.var_y},
      {"leakage_max", plane.var_a},
      {"mse_floor_under_invariance", cost.mse_floor_under_invariance},
      {"attribute_mse_ceiling_under_sufficiency",
       cost.attribute_mse_ceiling_under_sufficiency}};
  (*report)["region"] = PairList(RegionOutline(plane, samples));
  return PairList(FrontierPolyline(plane, samples));
}

bool ClassificationDegenerate(const ClassificationPlane& plane) {
  return plane.i_ay <= 1e-12 || plane.delta_y_given_a * plane.h_a <= 1e-12;
}

// ---------------------------------------------------------------------------
// analyze

struct Estimated {
  std::string name;
  PlanePoint point;
  Eigen::Index n = 0;
};

int RunAnalyze(const Options& o, Context& ctx) {
  const TaskKind task = RequireTask(o);
  if (o.reps.empty()) throw InputError("at least one representation file is required");
  if (!o.names.empty() && o.names.size() != o.reps.size()) {
    throw InputError("--names needs one name per representation file");
  }
  const EstimatorConfig config = Estimator(o);

  std::vector<std::future<Estimated>> jobs;
  for (std::size_t i = 0; i < o.reps.size(); ++i) {
    const std::string path = o.reps[i];
    const std::string name = o.names.empty() ? Stem(path) : o.names[i];
    jobs.push_back(std::async(std::launch::async, [path, name, task, config] {
      const RepresentationFile file = LoadRepresentationCsv(path, task);
      return Estimated{name, EstimatePlanePoint(file.sample, config), file.sample.size()};
    }));
  }
  std::vector<Estimated> results;
  std::vector<std::exception_ptr> failures;
  for (auto& job : jobs) {
    try {
      results.push_back(job.get());
    } catch (...) {
      failures.push_back(std::current_exception());
    }
  }
  if (!failures.empty()) std::rethrow_exception(failures.front());

  Eigen::VectorXd y, a;
  if (!o.dataset.empty()) {
    const TabularDataset ds = LoadRoles(o);
    y = ds.Values(o.target_col);
    a = ds.Values(o.attribute_col);
  } else {
    const RepresentationFile first = LoadRepresentationCsv(o.reps.front(), task);
    y = first.sample.y;
    a = first.sample.a;
  }

  json report = Envelope("analyze", {{"dataset", o.dataset.empty() ? json(nullptr) : json(o.dataset)},
                                     {"representations", o.reps},
                                     {"task", std::string(ToString(task))},
                                     {"target_col", o.target_col},
                                     {"attribute_col", o.attribute_col},
                                     {"estimator", EstimatorJson(o, task)},
                                     {"seed", o.seed}});
  json points = json::array();
  double e_y = 0.0, e_a = 0.0, leak_max = 0.0;
  if (task == TaskKind::kClassification) {
    const ClassificationPlane plane = ClassificationPlaneFromColumns(y, a);
    report["frontier"] = ClassificationGeometry(plane, &report);
    e_y = VertexEy(plane);
    e_a = VertexEa(plane);
    leak_max = plane.h_a;
    const bool degenerate = ClassificationDegenerate(plane);
    if (degenerate) ctx.Warn("no tradeoff: frontier reaches ideal corner");
    for (const auto& r : results) {
      json p = {{"name", r.name}, {"n", r.n}, {"utility", r.point.utility},
                {"leakage", r.point.leakage}};
      p["statistic"] = nullptr;
      p["status"] = nullptr;
      p["frontier_distance"] = nullptr;
      try {
        const PointClassification c = ClassifyPoint(plane, r.point);
        p["status"] = std::string(ToString(c.status));
        if (c.statistic) p["statistic"] = *c.statistic;
        p["frontier_distance"] = c.frontier_distance;
      } catch (const NumericalError&) {
        if (!degenerate) throw;
      }
      points.push_back(std::move(p));
    }
  } else {
    const RegressionPlane plane = RegressionPlaneFromColumns(y, a);
    report["frontier"] = RegressionGeometry(plane, o.samples, &report);
    if (plane.RhoSquared() <= 0.0) ctx.Warn("rho^2 = 0: frontier is the single point (Var(Y), 0)");
    e_y = VertexEyLs(plane);
    e_a = VertexEaLs(plane);
    leak_max = plane.var_a;
    for (const auto& r : results) {
      const PointClassificationLs c = ClassifyPointLs(plane, r.point);
      points.push_back({{"name", r.name},
                        {"n", r.n},
                        {"utility", r.point.utility},
                        {"leakage", r.point.leakage},
                        {"status", std::string(ToString(c.status))},
                        {"statistic", nullptr},
                        {"frontier_distance", c.frontier_distance},
                        {"alpha", c.alpha_of_point}});
    }
  }

  json dominance = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    json dominated_by = json::array();
    for (std::size_t j = 0; j < results.size(); ++j) {
      const PlanePoint& pi = results[i].point;
      const PlanePoint& pj = results[j].point;
      if (i != j && pj.utility >= pi.utility && pj.leakage <= pi.leakage &&
          (pj.utility > pi.utility || pj.leakage < pi.leakage)) {
        dominated_by.push_back(results[j].name);
        dominance.push_back({{"dominant", results[j].name}, {"dominated", results[i].name}});
      }
    }
    const bool interior = points[i]["status"] == "interior-suboptimal";
    points[i]["dominated"] = interior || !dominated_by.empty();
    points[i]["dominated_by"] = std::move(dominated_by);
  }

  json columns = {"lower_bound"}, utility = {0.0}, leakage = {e_a};
  for (const auto& r : results) {
    columns.push_back(r.name);
    utility.push_back(r.point.utility);
    leakage.push_back(r.point.leakage);
  }
  columns.push_back("upper_bound");
  utility.push_back(e_y);
  leakage.push_back(leak_max);
  for (const auto& p : points) {
    if (p["status"] == "outside-known-bounds") {
      ctx.Warn("point '" + p["name"].get<std::string>() +
               "' lies outside the plane's bounds; the plane and the point may come from "
               "different samples");
    }
  }
  report["points"] = std::move(points);
  report["dominance"] = std::move(dominance);
  report["table"] = {{"columns", columns}, {"utility", utility}, {"leakage", leakage}};

  if (o.format == "csv") {
    ctx.out << "row";
    for (const auto& c : columns) ctx.out << ',' << c.get<std::string>();
    ctx.out << "\nutility";
    for (const auto& v : utility) ctx.out << ',' << FormatNumber(v.get<double>());
    ctx.out << "\nleakage";
    for (const auto& v : leakage) ctx.out << ',' << FormatNumber(v.get<double>());
    ctx.out << '\n';
    return kExitOk;
  }
  Emit(ctx, std::move(report));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// frontier

int RunFrontier(const Options& o, Context& ctx) {
  const TaskKind task = RequireTask(o);
  if (o.samples < 2) throw InputError("--samples must be at least 2");
  json inputs = {{"task", std::string(ToString(task))}, {"samples", o.samples}, {"seed", o.seed}};
  json report;
  if (task == TaskKind::kClassification) {
    ClassificationPlane plane;
    if (!o.dataset.empty()) {
      const TabularDataset ds = LoadRoles(o);
      plane = ClassificationPlaneFromColumns(ds.Values(o.target_col), ds.Values(o.attribute_col));
      inputs["dataset"] = o.dataset;
    } else if (o.p_a0 && o.p_y1_a0 && o.p_y1_a1) {
      plane = ClassificationPlane::FromProbabilities(*o.p_a0, *o.p_y1_a0, *o.p_y1_a1);
      inputs["probabilities"] = {{"p_a0", *o.p_a0}, {"p_y1_a0", *o.p_y1_a0}, {"p_y1_a1", *o.p_y1_a1}};
    } else {
      throw InputError("classification frontier needs --dataset or --p-a0/--p-y1-a0/--p-y1-a1");
    }
    report = Envelope("frontier", inputs);
    json frontier = ClassificationGeometry(plane, &report);
    if (ClassificationDegenerate(plane)) {
      ctx.Warn("degenerate plane: the frontier is the single ideal corner");
      frontier = json::array({json::array({plane.h_y, 0.0})});
    }
    report["frontier"] = std::move(frontier);
  } else {
    RegressionPlane plane;
    if (!o.dataset.empty()) {
      const TabularDataset ds = LoadRoles(o);
      plane = RegressionPlaneFromColumns(ds.Values(o.target_col), ds.Values(o.attribute_col));
      inputs["dataset"] = o.dataset;
    } else if (o.var_y && o.var_a && o.cov) {
      plane.var_y = *o.var_y;
      plane.var_a = *o.var_a;
      plane.cov_ya = *o.cov;
      plane.Validate();
      inputs["moments"] = {{"var_y", *o.var_y}, {"var_a", *o.var_a}, {"cov", *o.cov}};
    } else {
      throw InputError("regression frontier needs --dataset or --var-y/--var-a/--cov");
    }
    report = Envelope("frontier", inputs);
    report["frontier"] = RegressionGeometry(plane, o.samples, &report);
    if (plane.RhoSquared() <= 0.0) {
      ctx.Warn("degenerate plane: the frontier is the single point (Var(Y), 0)");
    }
  }
  if (o.format == "csv") {
    ctx.out << "utility,leakage\n";
    for (const auto& p : report["frontier"]) {
      ctx.out << FormatNumber(p[0].get<double>()) << ',' << FormatNumber(p[1].get<double>())
              << '\n';
    }
    return kExitOk;
  }
  Emit(ctx, std::move(report));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// certify

int RunCertify(const Options& o, Context& ctx) {
  const TaskKind task = RequireTask(o);
  if (o.reps.size() != 1) throw InputError("certify takes exactly one representation file");
  const RepresentationFile file = LoadRepresentationCsv(o.reps.front(), task);
  const EstimatorConfig config = Estimator(o);
  json report = Envelope("certify", {{"dataset", o.dataset.empty() ? json(nullptr) : json(o.dataset)},
                                     {"representation", o.reps.front()},
                                     {"task", std::string(ToString(task))},
                                     {"epsilon", o.epsilon},
                                     {"bootstrap", o.bootstrap},
                                     {"estimator", EstimatorJson(o, task)},
                                     {"seed", o.seed}});
  Eigen::VectorXd y = file.sample.y, a = file.sample.a;
  if (!o.dataset.empty()) {
    const TabularDataset ds = LoadRoles(o);
    y = ds.Values(o.target_col);
    a = ds.Values(o.attribute_col);
  }
  const PlanePoint point = EstimatePlanePoint(file.sample, config);
  json p = {{"name", Stem(o.reps.front())},
            {"n", file.sample.size()},
            {"utility", point.utility},
            {"leakage", point.leakage}};
  bool suboptimal = false;
  if (task == TaskKind::kClassification) {
    const ClassificationPlane plane = ClassificationPlaneFromColumns(y, a);
    ClassificationGeometry(plane, &report);
    CertifyOptions options;
    options.epsilon = o.epsilon;
    options.bootstrap_resamples = o.bootstrap;
    options.seed = o.seed;
    options.miller_madow = o.miller_madow;
    const Certificate cert = Certify(ClassificationJoint(file.sample, config), options);
    suboptimal = cert.suboptimal;
    report["certificates"] = json::array(
        {{{"name", p["name"]},
          {"rule", "plug-in statistic > 1 + epsilon"},
          {"statistic", cert.statistic ? json(*cert.statistic) : json(nullptr)},
          {"threshold", cert.threshold},
          {"epsilon", cert.epsilon},
          {"verdict", cert.suboptimal ? "suboptimal" : "not-certified"},
          {"n", cert.n},
          {"bootstrap_stderr",
           cert.bootstrap_stderr ? json(*cert.bootstrap_stderr) : json(nullptr)},
          {"bootstrap_used", cert.bootstrap_used},
          {"seed", cert.seed},
          {"confidence_note", cert.confidence_note}}});
    if (!cert.statistic) ctx.Warn("denominator degenerate at this sample");
  } else {
    const RegressionPlane plane = RegressionPlaneFromColumns(y, a);
    RegressionGeometry(plane, o.samples, &report);
    const RegressionCertificate cert = CertifyRegression(plane, point, o.epsilon);
    suboptimal = cert.suboptimal;
    p["status"] = std::string(ToString(cert.classification.status));
    p["frontier_distance"] = cert.classification.frontier_distance;
    report["certificates"] = json::array(
        {{{"name", p["name"]},
          {"rule", "(frontier utility at the point's leakage - utility) / Var(Y) > epsilon"},
          {"statistic", cert.statistic},
          {"threshold", cert.epsilon},
          {"epsilon", cert.epsilon},
          {"verdict", cert.suboptimal ? "suboptimal" : "not-certified"},
          {"n", static_cast<double>(file.sample.size())},
          {"bootstrap_stderr", nullptr},
          {"bootstrap_used", 0},
          {"seed", o.seed},
          {"confidence_note",
           "regression certificate compares the estimated point with the exact frontier; "
           "no sampling error model is applied"}}});
  }
  report["points"] = json::array({p});
  Emit(ctx, std::move(report));
  return suboptimal ? kExitCertified : kExitOk;
}

// ---------------------------------------------------------------------------
// oracle

Eigen::MatrixXd TargetFromSpec(const std::string& spec, const GaussianModel& model) {
  const Eigen::Index d = model.dim();
  if (spec == "sigma" || spec == "identity") return model.sigma;
  if (spec == "zero") return Eigen::MatrixXd::Zero(d, d);
  const json value = ReadJsonFile(spec);
  if (value.is_object()) {
    if (!value.contains("m")) throw InputError("target JSON needs 'm'");
    return MatrixFromJson(value.at("m"), d, d);
  }
  return MatrixFromJson(value, d, d);
}

int RunOracle(const Options& o, Context& ctx) {
  const GaussianModel model = ModelFromJson(ReadJsonFile(o.model));
  const RegressionPlane plane = model.Plane();
  json report = Envelope("oracle", {{"model", o.model}, {"mode", o.mode}, {"mc", o.mc},
                                    {"seed", o.seed}});
  ConstructedRepresentation rep;
  PlanePoint target{0.0, 0.0, TaskKind::kRegression};
  const double rho2 = plane.RhoSquared();
  if (o.mode == "ey") {
    rep = ConstructInvariantOptimal(model);
    target = {plane.var_y * (1.0 - rho2), 0.0, TaskKind::kRegression};
  } else if (o.mode == "ea") {
    rep = ConstructSufficiencyOptimal(model);
    target = {plane.var_y, plane.var_a * rho2, TaskKind::kRegression};
  } else if (o.mode.rfind("lagrangian:", 0) == 0) {
    double lambda = 0.0;
    try {
      std::size_t used = 0;
      const std::string text = o.mode.substr(11);
      lambda = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InputError("lagrangian mode needs a number, e.g. lagrangian:0.5");
    }
    rep = ConstructLagrangianOptimal(model, lambda);
    target = LagrangianOptimalPoint(plane, lambda);
    const PlanePoint closed = ClosedFormPlanePoint(model, rep);
    report["lagrangian"] = {{"lambda", lambda},
                            {"objective", lambda * closed.leakage - closed.utility},
                            {"bound", LagrangianBound(plane, lambda)}};
  } else if (o.mode.rfind("target:", 0) == 0) {
    const Eigen::MatrixXd m = TargetFromSpec(o.mode.substr(7), model);
    rep = RealizePsdTarget(model, m);
    target = {model.y.dot(m * model.y), model.a.dot(m * model.a), TaskKind::kRegression};
    report["target"] = MatrixJson(m);
  } else {
    throw InputError("--mode must be ey, ea, lagrangian:<lambda> or target:<sigma|identity|zero|file>");
  }
  const AchievabilityReport ach = MonteCarloVerify(model, rep, target, o.mc, o.seed);
  report["plane"] = RegressionPlaneJson(plane);
  report["vertices"] = {{"e_y", VertexEyLs(plane)}, {"e_a", VertexEaLs(plane)}};
  report["representation"] = RepresentationJson(rep);
  report["achievability"] = {
      {"closed_form", PointJson(ach.closed_form)},
      {"monte_carlo", PointJson(ach.monte_carlo)},
      {"mc_stderr", {{"utility", ach.mc_stderr_utility}, {"leakage", ach.mc_stderr_leakage}}},
      {"bound_target", PointJson(ach.bound_target)},
      {"verdict", ach.attained ? "attained" : "gap"},
      {"mc_within_3se", ach.mc_within_3se},
      {"n", ach.n},
      {"seed", ach.seed}};
  report["points"] = json::array(
      {{{"name", "closed_form"}, {"utility", ach.closed_form.utility},
        {"leakage", ach.closed_form.leakage}},
       {{"name", "monte_carlo"}, {"utility", ach.monte_carlo.utility},
        {"leakage", ach.monte_carlo.leakage}}});
  report["frontier"] = PairList(FrontierPolyline(plane, o.samples));
  if (!ach.mc_within_3se) ctx.Warn("Monte-Carlo estimate is outside 3 standard errors");
  Emit(ctx, std::move(report));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mix, plot, synth, train

int RunMix(const Options& o, Context& ctx) {
  const TaskKind task = o.task.empty() ? TaskKind::kRegression : ParseTaskKind(o.task);
  if (o.reps.size() != 2) throw InputError("mix takes two representation files");
  const RepresentationFile r0 = LoadRepresentationCsv(o.reps[0], task);
  const RepresentationFile r1 = LoadRepresentationCsv(o.reps[1], task);
  if (r0.row_ids != r1.row_ids) throw InputError("representation files differ in row_id");
  const MixedRepresentation mixed = Mix(r0.sample, r1.sample, o.u, o.seed);
  double mean = 0.0;
  for (int s : mixed.selector) mean += s;
  mean /= static_cast<double>(mixed.selector.size());
  ctx.log->info("mix u={} seed={} selector mean={}", o.u, o.seed, mean);
  if (o.out.empty()) {
    WriteRepresentationCsv(ctx.out, mixed.sample, r0.row_ids);
  } else {
    std::ofstream f = OpenOutput(o.out);
    WriteRepresentationCsv(f, mixed.sample, r0.row_ids);
  }
  return kExitOk;
}

int RunPlot(const Options& o, Context&) {
  const json report = ReadJsonFile(o.report);
  const std::string svg = RenderSvg(report);
  std::ofstream f = OpenOutput(o.out);
  f << svg;
  return kExitOk;
}

int RunSynth(const std::string& kind, const Options& o, Context& ctx) {
  std::ostringstream buffer;
  if (kind == "bernoulli") {
    if (!(o.p_a0 && o.p_y1_a0 && o.p_y1_a1)) {
      throw InputError("synth bernoulli needs --p-a0, --p-y1-a0 and --p-y1-a1");
    }
    WriteCsv(buffer, SynthBernoulliPair(*o.p_a0, *o.p_y1_a0, *o.p_y1_a1, o.n, o.seed));
  } else if (kind == "gaussian") {
    WriteCsv(buffer, SynthGaussian(ModelFromJson(ReadJsonFile(o.model)), o.n, o.seed));
  } else if (kind == "threshold") {
    if (!o.p_a0) throw InputError("synth threshold needs --p-a0");
    WriteRepresentationCsv(buffer,
                           ThresholdAttainmentSample(o.alpha, o.beta, *o.p_a0, o.n, o.seed));
  } else {
    throw InputError("unknown generator '" + kind + "'");
  }
  if (o.out.empty()) {
    ctx.out << buffer.str();
  } else {
    std::ofstream f = OpenOutput(o.out);
    f << buffer.str();
  }
  return kExitOk;
}

int RunTrain(const Options& o, Context& ctx) {
  const TaskKind task = RequireTask(o);
  DatasetSchema schema;
  schema.target = o.target_col;
  schema.attribute = o.attribute_col;
  schema.features = o.feature_cols;
  schema.categorical = o.categorical_cols;
  const TabularDataset ds = LoadCsv(o.dataset, schema);
  const auto [train, eval] = SplitDataset(ds, o.train_frac, o.seed);
  LearnerConfig config;
  config.kind = ParseLearnerKind(o.learner);
  config.d_out = o.d_out;
  config.epochs = o.epochs;
  config.learning_rate = o.lr;
  config.seed = o.seed;
  const BaselineResult result = TrainBaseline(train, eval, task, config);
  for (const auto& w : result.warnings) ctx.Warn(w);
  ctx.log->info("trained {} on {} rows: loss {}", o.learner, train.rows(), result.train_loss);
  if (o.out.empty()) {
    WriteRepresentationCsv(ctx.out, result.representation);
  } else {
    std::ofstream f = OpenOutput(o.out);
    WriteRepresentationCsv(f, result.representation);
  }
  return kExitOk;
}

void ErrorReport(std::ostream& out, const std::string& command, const char* kind,
                 const std::string& message, int code) {
  const json report = {{"schema_version", kSchemaVersion},
                       {"command", command.empty() ? "infoplane" : command},
                       {"error", {{"kind", kind}, {"message", message}}},
                       {"exit_code", code}};
  out << report.dump(2) << '\n';
}

void AddEstimatorFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--bins", o.bins, "Equal-frequency bins per coordinate (0: automatic)");
  cmd->add_option("--knn-k", o.knn_k, "Neighbours for the kNN path (0: ceil(sqrt(N)))");
  cmd->add_flag("--miller-madow", o.miller_madow, "Miller-Madow bias correction");
}

void AddRoleFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--task", o.task, "classification or regression");
  cmd->add_option("--target-col", o.target_col, "Target column name");
  cmd->add_option("--attribute-col", o.attribute_col, "Protected attribute column name");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("infoplane", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("INFOPLANE_LOG")) {
    log->set_level(spdlog::level::from_str(env));
  }
  Context ctx{out, log, {}};
  Options o;

  CLI::App app{"Accuracy-invariance information plane toolkit", "infoplane"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* analyze = app.add_subcommand("analyze", "Place representations on the information plane");
  AddRoleFlags(analyze, o);
  AddEstimatorFlags(analyze, o);
  analyze->add_option("--dataset", o.dataset, "Dataset CSV holding the role columns");
  analyze->add_option("representations", o.reps, "Representation CSV files")->required();
  analyze->add_option("--names", o.names, "Display names, one per file")->delimiter(',');
  analyze->add_option("--samples", o.samples, "Frontier samples (regression)");
  analyze->add_option("--seed", o.seed, "Seed (recorded; analyze draws no randomness)");
  analyze->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* frontier = app.add_subcommand("frontier", "Emit the feasible region and frontier");
  AddRoleFlags(frontier, o);
  frontier->add_option("--dataset", o.dataset, "Dataset CSV");
  frontier->add_option("--p-a0", o.p_a0, "Pr(A = 0)");
  frontier->add_option("--p-y1-a0", o.p_y1_a0, "Pr(Y = 1 | A = 0)");
  frontier->add_option("--p-y1-a1", o.p_y1_a1, "Pr(Y = 1 | A = 1)");
  frontier->add_option("--var-y", o.var_y, "Var(Y)");
  frontier->add_option("--var-a", o.var_a, "Var(A)");
  frontier->add_option("--cov", o.cov, "Cov(Y, A)");
  frontier->add_option("--samples", o.samples, "Frontier samples");
  frontier->add_option("--seed", o.seed, "Seed (recorded only)");
  frontier->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* certify = app.add_subcommand("certify", "Certify suboptimality (exit 10 when certified)");
  AddRoleFlags(certify, o);
  AddEstimatorFlags(certify, o);
  certify->add_option("--dataset", o.dataset, "Dataset CSV holding the role columns");
  certify->add_option("representation", o.reps, "Representation CSV")->required();
  certify->add_option("--epsilon", o.epsilon, "Margin above the threshold")->required();
  certify->add_option("--bootstrap", o.bootstrap, "Bootstrap resamples");
  certify->add_option("--samples", o.samples, "Frontier samples (regression)");
  certify->add_option("--seed", o.seed, "Bootstrap seed");

  auto* oracle = app.add_subcommand("oracle", "Construct and verify frontier-attaining representations");
  oracle->add_option("model", o.model, "Gaussian model JSON")->required();
  oracle->add_option("--mode", o.mode, "ey | ea | lagrangian:<lambda> | target:<sigma|identity|zero|file>")
      ->required();
  oracle->add_option("--mc", o.mc, "Monte-Carlo sample size");
  oracle->add_option("--samples", o.samples, "Frontier samples");
  oracle->add_option("--seed", o.seed, "Monte-Carlo seed");

  auto* mix = app.add_subcommand("mix", "Randomly mix two representations");
  mix->add_option("representations", o.reps, "rep0.csv rep1.csv")->required()->expected(2);
  mix->add_option("--u", o.u, "Probability of taking rep0")->required();
  mix->add_option("--task", o.task, "classification or regression");
  mix->add_option("--seed", o.seed, "Selector seed");
  mix->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* plot = app.add_subcommand("plot", "Render a report as SVG");
  plot->add_option("report", o.report, "Report JSON")->required();
  plot->add_option("--out", o.out, "SVG path")->required();

  auto* synth = app.add_subcommand("synth", "Write synthetic data");
  std::string synth_kind;
  synth->add_option("generator", synth_kind, "bernoulli | gaussian | threshold")->required();
  synth->add_option("--p-a0", o.p_a0, "Pr(A = 0)");
  synth->add_option("--p-y1-a0", o.p_y1_a0, "Pr(Y = 1 | A = 0)");
  synth->add_option("--p-y1-a1", o.p_y1_a1, "Pr(Y = 1 | A = 1)");
  synth->add_option("--alpha", o.alpha, "Threshold for A = 0");
  synth->add_option("--beta", o.beta, "Threshold for A = 1");
  synth->add_option("--model", o.model, "Gaussian model JSON");
  synth->add_option("--n", o.n, "Rows");
  synth->add_option("--seed", o.seed, "Seed");
  synth->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* train = app.add_subcommand("train", "Train a baseline and write its held-out representation");
  AddRoleFlags(train, o);
  train->add_option("dataset", o.dataset, "Dataset CSV")->required();
  train->add_option("--feature-cols", o.feature_cols, "Feature columns")->delimiter(',');
  train->add_option("--categorical-cols", o.categorical_cols, "Categorical features")
      ->delimiter(',');
  train->add_option("--learner", o.learner, "logit | ols | linear");
  train->add_option("--d-out", o.d_out, "Output width of the linear learner");
  train->add_option("--epochs", o.epochs, "Gradient-descent epochs");
  train->add_option("--lr", o.lr, "Learning rate");
  train->add_option("--train-frac", o.train_frac, "Training fraction");
  train->add_option("--seed", o.seed, "Split and initialization seed");
  train->add_option("--out", o.out, "Output CSV (default stdout)");

  std::string command;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    log->error("{}", e.what());
    ErrorReport(out, command, "input", e.what(), kExitInputError);
    return kExitInputError;
  }

  try {
    if (command == "analyze") return RunAnalyze(o, ctx);
    if (command == "frontier") return RunFrontier(o, ctx);
    if (command == "certify") return RunCertify(o, ctx);
    if (command == "oracle") return RunOracle(o, ctx);
    if (command == "mix") return RunMix(o, ctx);
    if (command == "plot") return RunPlot(o, ctx);
    if (command == "synth") return RunSynth(synth_kind, o, ctx);
    if (command == "train") return RunTrain(o, ctx);
    throw InputError("unknown command");
  } catch (const InputError& e) {
    log->error("{}", e.what());
    ErrorReport(out, command, "input", e.what(), kExitInputError);
    return kExitInputError;
  } catch (const json::exception& e) {
    log->error("{}", e.what());
    ErrorReport(out, command, "input", e.what(), kExitInputError);
    return kExitInputError;
  } catch (const NumericalError& e) {
    log->error("{}", e.what());
    ErrorReport(out, command, "numerical", e.what(), kExitNumericalError);
    return kExitNumericalError;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    ErrorReport(out, command, "numerical", e.what(), kExitNumericalError);
    return kExitNumericalError;
  }
}

}  // namespace infoplane::cli
