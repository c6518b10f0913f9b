#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.h"
#include "infoplane/classification_plane.h"
#include "infoplane/dataset.h"
#include "json_io.h"
#include "plot.h"

namespace infoplane::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  json Json() const { return json::parse(out); }
};

Result Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = Run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("infoplane_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string WriteRep(const std::string& name, const RepresentationSample& s) {
    std::ofstream f(Path(name));
    WriteRepresentationCsv(f, s);
    return Path(name);
  }

  std::string WriteText(const std::string& name, const std::string& text) {
    std::ofstream f(Path(name));
    f << text;
    return Path(name);
  }

  static std::string ReadText(const std::string& path) {
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

// Threshold representation with Z moved to a constant or to Y.
RepresentationSample Threshold(std::int64_t n, std::uint64_t seed) {
  return ThresholdAttainmentSample(0.2, 0.8, 0.5, n, seed);
}

TEST_F(CliTest, AnalyzeConstantRepresentationIsDominated) {
  RepresentationSample s = Threshold(2000, 1);
  s.z.setZero();
  const Result r = Invoke({"analyze", "--task", "classification", WriteRep("const.csv", s)});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const json report = r.Json();
  EXPECT_EQ(report["schema_version"], kSchemaVersion);
  const json& p = report["points"][0];
  EXPECT_EQ(p["name"], "const");
  EXPECT_DOUBLE_EQ(p["utility"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(p["leakage"].get<double>(), 0.0);
  EXPECT_TRUE(p["dominated"].get<bool>());
  EXPECT_EQ(p["status"], "interior-suboptimal");
}

TEST_F(CliTest, AnalyzeReportsDominanceEdgesInInputOrder) {
  RepresentationSample good = Threshold(3000, 2);
  RepresentationSample attr = good;
  attr.z = good.a;
  RepresentationSample full = good;
  full.z = good.y;
  const Result r = Invoke({"analyze", "--task", "classification", WriteRep("good.csv", good),
                           WriteRep("attr.csv", attr), WriteRep("full.csv", full)});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const json report = r.Json();
  ASSERT_EQ(report["points"].size(), 3u);
  EXPECT_EQ(report["points"][0]["name"], "good");
  EXPECT_EQ(report["points"][1]["name"], "attr");
  EXPECT_EQ(report["points"][2]["name"], "full");
  // Z = Y has more utility and less leakage than Z = A.
  const json edge = {{"dominant", "full"}, {"dominated", "attr"}};
  EXPECT_NE(std::find(report["dominance"].begin(), report["dominance"].end(), edge),
            report["dominance"].end())
      << report["dominance"].dump();
  const json& by = report["points"][1]["dominated_by"];
  EXPECT_NE(std::find(by.begin(), by.end(), "full"), by.end());
  EXPECT_TRUE(report["points"][2]["dominated_by"].empty());
}

TEST_F(CliTest, AnalyzeTableMirrorsLowerMethodsUpperLayout) {
  const TabularDataset ds = SynthBernoulliPair(0.673, 0.31, 0.113, 4000, 3);
  std::ofstream(Path("data.csv")) << [&] {
    std::ostringstream o;
    WriteCsv(o, ds);
    return o.str();
  }();
  std::vector<std::string> reps;
  for (const char* learner : {"logit", "linear"}) {
    const std::string out = Path(std::string(learner) + ".csv");
    const Result t = Invoke({"train", Path("data.csv"), "--task", "classification",
                             "--learner", learner, "--feature-cols", "x_y,x_a,x_noise",
                             "--epochs", "100", "--seed", "4", "--out", out});
    ASSERT_EQ(t.code, kExitOk) << t.out;
    reps.push_back(out);
  }
  RepresentationSample base = LoadRepresentationCsv(reps[0], TaskKind::kClassification).sample;
  base.z.setZero();
  reps.push_back(WriteRep("constant.csv", base));
  base.z = base.y;
  reps.push_back(WriteRep("oracle.csv", base));
  std::vector<std::string> args = {"analyze", "--task", "classification"};
  args.insert(args.end(), reps.begin(), reps.end());
  const Result r = Invoke(args);
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const json table = r.Json()["table"];
  EXPECT_EQ(table["columns"],
            json({"lower_bound", "logit", "linear", "constant", "oracle", "upper_bound"}));
  EXPECT_EQ(table["utility"].size(), 6u);
  EXPECT_DOUBLE_EQ(table["utility"][0].get<double>(), 0.0);

  args.push_back("--format");
  args.push_back("csv");
  const Result csv = Invoke(args);
  EXPECT_EQ(csv.out.substr(0, 16), "row,lower_bound,");
}

TEST_F(CliTest, AnalyzeIsDeterministic) {
  const std::string rep = WriteRep("t.csv", Threshold(3000, 5));
  const Result a = Invoke({"analyze", "--task", "classification", rep});
  const Result b = Invoke({"analyze", "--task", "classification", rep});
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, AnalyzeMissingFileIsInputError) {
  const Result r = Invoke({"analyze", "--task", "classification", Path("none.csv")});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_EQ(r.Json()["error"]["kind"], "input");
}

TEST_F(CliTest, AnalyzeDegenerateEstimatorIsNumericalError) {
  RepresentationSample s;
  s.z = Eigen::MatrixXd::Zero(5, 1);
  s.y = Eigen::VectorXd::LinSpaced(5, 0, 4);
  s.a = s.y;
  s.z.col(0) = Eigen::VectorXd::LinSpaced(5, 0, 4);
  const Result r = Invoke({"analyze", "--task", "regression", "--knn-k", "2",
                           WriteRep("r.csv", s)});
  // Five distinct rows use the group-by path, so this succeeds.
  EXPECT_EQ(r.code, kExitOk) << r.out;
  const Result bad = Invoke({"oracle", WriteText("m.json", R"({"dim": 2,
      "sigma": [[1, 2], [2, 1]], "a": [1, 0], "y": [0, 1]})"), "--mode", "ey"});
  EXPECT_EQ(bad.code, kExitNumericalError);
  EXPECT_EQ(bad.Json()["error"]["kind"], "numerical");
}

TEST_F(CliTest, FrontierEndpointsEqualVertices) {
  const Result r = Invoke({"frontier", "--task", "classification", "--p-a0", "0.673",
                           "--p-y1-a0", "0.31", "--p-y1-a1", "0.113"});
  ASSERT_EQ(r.code, kExitOk);
  const json report = r.Json();
  const ClassificationPlane p = ClassificationPlane::FromProbabilities(0.673, 0.31, 0.113);
  EXPECT_NEAR(report["frontier"][0][0].get<double>(), VertexEy(p), 1e-15);
  EXPECT_NEAR(report["frontier"][1][1].get<double>(), VertexEa(p), 1e-15);
  EXPECT_EQ(report["vertices"]["polygon"].size(), 6u);
  EXPECT_EQ(report["vertices"]["chord"], report["frontier"]);
}

TEST_F(CliTest, FrontierRegressionPolylineIsConcave) {
  const Result r = Invoke({"frontier", "--task", "regression", "--var-y", "1.3", "--var-a",
                           "0.8", "--cov", "0.6", "--samples", "51"});
  ASSERT_EQ(r.code, kExitOk);
  const json f = r.Json()["frontier"];
  ASSERT_EQ(f.size(), 51u);
  EXPECT_NEAR(f[0][0].get<double>(), 1.3 * (1 - 0.36 / (1.3 * 0.8)), 1e-12);
  EXPECT_NEAR(f[50][0].get<double>(), 1.3, 1e-12);
  // Utility as a function of alpha (evenly spaced leakage) has
  // non-positive second differences.
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double d2 = f[i + 1][0].get<double>() - 2 * f[i][0].get<double>() +
                      f[i - 1][0].get<double>();
    EXPECT_LE(d2, 1e-12) << i;
  }
}

TEST_F(CliTest, FrontierDegenerateCases) {
  const Result flat =
      Invoke({"frontier", "--task", "regression", "--var-y", "2", "--var-a", "1", "--cov", "0"});
  ASSERT_EQ(flat.code, kExitOk);
  EXPECT_EQ(flat.Json()["frontier"], json::parse("[[2.0, 0.0]]"));
  EXPECT_FALSE(flat.Json()["warnings"].empty());
  const Result indep = Invoke({"frontier", "--task", "classification", "--p-a0", "0.5",
                               "--p-y1-a0", "0.3", "--p-y1-a1", "0.3"});
  ASSERT_EQ(indep.code, kExitOk);
  EXPECT_EQ(indep.Json()["frontier"].size(), 1u);
  EXPECT_FALSE(indep.Json()["warnings"].empty());
}

TEST_F(CliTest, FrontierCsv) {
  const Result r = Invoke({"frontier", "--task", "regression", "--var-y", "1", "--var-a", "1",
                           "--cov", "0.5", "--samples", "3", "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.substr(0, 16), "utility,leakage\n");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST_F(CliTest, FrontierMissingPlaneIsInputError) {
  EXPECT_EQ(Invoke({"frontier", "--task", "regression"}).code, kExitInputError);
  EXPECT_EQ(Invoke({"frontier"}).code, kExitInputError);
  EXPECT_EQ(Invoke({"frontier", "--bogus"}).code, kExitInputError);
}

TEST_F(CliTest, CertifyExitCodes) {
  RepresentationSample s = Threshold(20000, 6);
  const std::string attain = WriteRep("attain.csv", s);
  s.z.setZero();
  const std::string constant = WriteRep("constant.csv", s);
  const std::vector<std::string> common = {"--task", "classification", "--epsilon", "0.05",
                                           "--bootstrap", "50"};
  std::vector<std::string> args = {"certify", attain};
  args.insert(args.end(), common.begin(), common.end());
  const Result a = Invoke(args);
  EXPECT_EQ(a.code, kExitOk) << a.out;
  EXPECT_EQ(a.Json()["certificates"][0]["verdict"], "not-certified");
  args[1] = constant;
  const Result c = Invoke(args);
  EXPECT_EQ(c.code, kExitCertified) << c.out;
  EXPECT_EQ(c.Json()["certificates"][0]["verdict"], "suboptimal");
  const Result huge = Invoke({"certify", constant, "--task", "classification", "--epsilon",
                              "1e9", "--bootstrap", "10"});
  EXPECT_EQ(huge.code, kExitOk);
}

TEST_F(CliTest, CertifyRequiresEpsilon) {
  const std::string rep = WriteRep("t.csv", Threshold(100, 1));
  EXPECT_EQ(Invoke({"certify", rep, "--task", "classification"}).code, kExitInputError);
}

TEST_F(CliTest, OracleModes) {
  const std::string model = WriteText("m.json", R"({"dim": 2, "sigma": [[1, 0], [0, 1]],
      "a": [1, 0], "y": [0.6, 0.8]})");
  const Result id = Invoke({"oracle", model, "--mode", "target:identity", "--mc", "2000"});
  ASSERT_EQ(id.code, kExitOk) << id.out;
  const json cf = id.Json()["achievability"]["closed_form"];
  EXPECT_NEAR(cf["utility"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(cf["leakage"].get<double>(), 1.0, 1e-12);
  const Result ey = Invoke({"oracle", model, "--mode", "ey", "--mc", "20000", "--seed", "3"});
  ASSERT_EQ(ey.code, kExitOk);
  EXPECT_EQ(ey.Json()["achievability"]["verdict"], "attained");
  EXPECT_EQ(ey.Json()["achievability"]["seed"], 3);
  const Result lag = Invoke({"oracle", model, "--mode", "lagrangian:1", "--mc", "2000"});
  ASSERT_EQ(lag.code, kExitOk);
  EXPECT_NEAR(lag.Json()["lagrangian"]["objective"].get<double>(),
              lag.Json()["lagrangian"]["bound"].get<double>(), 1e-12);
  const std::string neg = WriteText("neg.json", "[[1, 0], [0, -1]]");
  EXPECT_EQ(Invoke({"oracle", model, "--mode", "target:" + neg}).code, kExitNumericalError);
  EXPECT_EQ(Invoke({"oracle", model, "--mode", "lagrangian:x"}).code, kExitInputError);
  EXPECT_EQ(Invoke({"oracle", model, "--mode", "nope"}).code, kExitInputError);
}

TEST_F(CliTest, MixEndpointsAppendSelectorColumn) {
  RepresentationSample s0 = Threshold(500, 7);
  RepresentationSample s1 = s0;
  s1.z.setZero();
  const std::string r0 = WriteRep("r0.csv", s0);
  const std::string r1 = WriteRep("r1.csv", s1);
  ASSERT_EQ(Invoke({"mix", r0, r1, "--u", "1", "--out", Path("m1.csv")}).code, kExitOk);
  ASSERT_EQ(Invoke({"mix", r0, r1, "--u", "0", "--out", Path("m0.csv")}).code, kExitOk);
  RepresentationSample e1 = s0;
  e1.z.conservativeResize(Eigen::NoChange, 2);
  e1.z.col(1).setOnes();
  RepresentationSample e0 = s1;
  e0.z.conservativeResize(Eigen::NoChange, 2);
  e0.z.col(1).setZero();
  std::ostringstream want1, want0;
  WriteRepresentationCsv(want1, e1);
  WriteRepresentationCsv(want0, e0);
  EXPECT_EQ(ReadText(Path("m1.csv")), want1.str());
  EXPECT_EQ(ReadText(Path("m0.csv")), want0.str());
}

TEST_F(CliTest, MixHalfSelectorMean) {
  RepresentationSample s0 = Threshold(20000, 8);
  RepresentationSample s1 = s0;
  s1.z.setZero();
  const Result r = Invoke({"mix", WriteRep("a.csv", s0), WriteRep("b.csv", s1), "--u", "0.5",
                           "--seed", "9"});
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream in(r.out);
  const RepresentationFile f = ReadRepresentationCsv(in, TaskKind::kRegression);
  const double mean = f.sample.z.col(1).mean();
  EXPECT_LE(std::abs(mean - 0.5), 3.0 * std::sqrt(0.25 / 20000.0));
}

TEST_F(CliTest, PlotIsDeterministicAndPlacesVertices) {
  const Result r = Invoke({"frontier", "--task", "classification", "--p-a0", "0.673",
                           "--p-y1-a0", "0.31", "--p-y1-a1", "0.113"});
  const std::string report = WriteText("f.json", r.out);
  ASSERT_EQ(Invoke({"plot", report, "--out", Path("a.svg")}).code, kExitOk);
  ASSERT_EQ(Invoke({"plot", report, "--out", Path("b.svg")}).code, kExitOk);
  const std::string svg = ReadText(Path("a.svg"));
  EXPECT_EQ(svg, ReadText(Path("b.svg")));
  EXPECT_EQ(svg.find("class=\"point\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"region\""), std::string::npos);
  const json j = json::parse(r.out);
  const PlotTransform t = TransformForReport(j);
  char expect[96];
  std::snprintf(expect, sizeof expect, "class=\"vertex\" cx=\"%.3f\" cy=\"%.3f\"",
                t.X(j["vertices"]["e_y"].get<double>()), t.Y(0.0));
  EXPECT_NE(svg.find(expect), std::string::npos) << expect;
  // Utility grows rightward, leakage upward.
  EXPECT_LT(t.X(0.1), t.X(0.2));
  EXPECT_GT(t.Y(0.1), t.Y(0.2));
}

TEST_F(CliTest, PlotDrawsNamedPoints) {
  const std::string rep = WriteRep("method<1>.csv", Threshold(1000, 2));
  const Result r = Invoke({"analyze", "--task", "classification", rep});
  const std::string report = WriteText("r.json", r.out);
  ASSERT_EQ(Invoke({"plot", report, "--out", Path("p.svg")}).code, kExitOk);
  const std::string svg = ReadText(Path("p.svg"));
  EXPECT_NE(svg.find("class=\"point\""), std::string::npos);
  EXPECT_NE(svg.find("method&lt;1&gt;"), std::string::npos);
}

TEST_F(CliTest, SynthAndTrainRoundTrip) {
  ASSERT_EQ(Invoke({"synth", "bernoulli", "--p-a0", "0.6", "--p-y1-a0", "0.3", "--p-y1-a1",
                    "0.7", "--n", "500", "--out", Path("d.csv")})
                .code,
            kExitOk);
  const Result t = Invoke({"train", Path("d.csv"), "--task", "classification", "--feature-cols",
                           "x_y,x_noise", "--out", Path("z.csv")});
  ASSERT_EQ(t.code, kExitOk) << t.out;
  const RepresentationFile f = LoadRepresentationCsv(Path("z.csv"), TaskKind::kClassification);
  EXPECT_EQ(f.sample.size(), 100);
  EXPECT_EQ(Invoke({"synth", "nothing"}).code, kExitInputError);
}

TEST_F(CliTest, HelpExitsZero) {
  const Result r = Invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("analyze"), std::string::npos);
}

}  // namespace
}  // namespace infoplane::cli
