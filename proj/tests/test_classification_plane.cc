#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "infoplane/classification_plane.h"
#include "infoplane/error.h"
#include "test_support.h"

namespace infoplane {
namespace {

using testing::BinaryEntropy;

PlanePoint Pt(double u, double l) { return {u, l, TaskKind::kClassification}; }

ClassificationPlane Adult() { return ClassificationPlane::FromProbabilities(0.673, 0.31, 0.113); }

TEST(ClassificationPlane, AdultStatistics) {
  const ClassificationPlane p = Adult();
  EXPECT_NEAR(p.h_y, 0.8041987508245549, 1e-13);
  EXPECT_NEAR(p.h_a, 0.9118318792514706, 1e-13);
  EXPECT_NEAR(p.i_ay, 0.036683017163687714, 1e-13);
  EXPECT_NEAR(p.delta_y_given_a, 0.197, 1e-15);
  EXPECT_NEAR(p.delta_a_given_y, 0.23400312757722577, 1e-13);
  EXPECT_NEAR(BinaryEntropy(0.673), p.h_a, 1e-15);
}

TEST(ClassificationPlane, SwappedIsInvolution) {
  const ClassificationPlane p = Adult();
  const ClassificationPlane q = p.Swapped().Swapped();
  EXPECT_EQ(p.h_y, q.h_y);
  EXPECT_EQ(p.delta_a_given_y, q.delta_a_given_y);
  EXPECT_EQ(p.Swapped().h_y, p.h_a);
}

TEST(ClassificationPlane, InvalidProbabilities) {
  EXPECT_THROW(ClassificationPlane::FromProbabilities(1.2, 0.3, 0.3), InputError);
  EXPECT_THROW(ClassificationPlane::FromProbabilities(0.0, 0.3, 0.3), std::exception);
}

TEST(Vertices, IndependentAttribute) {
  const ClassificationPlane p = ClassificationPlane::FromProbabilities(0.4, 0.3, 0.3);
  EXPECT_NEAR(VertexEy(p), p.h_y, 1e-15);
  EXPECT_NEAR(VertexEa(p), 0.0, 1e-15);
}

TEST(Vertices, TargetEqualsAttribute) {
  const ClassificationPlane p = ClassificationPlane::FromProbabilities(0.5, 0.0, 1.0);
  EXPECT_NEAR(VertexEy(p), 0.0, 1e-15);
  EXPECT_NEAR(VertexEa(p), 1.0, 1e-15);
}

TEST(Vertices, Adult) {
  EXPECT_NEAR(VertexEy(Adult()), 0.6245678706120152, 1e-13);
  EXPECT_NEAR(VertexEa(Adult()), 0.036683017163687714, 1e-13);
}

// Exact maximum of I(Y;Z) over three-symbol Z independent of A. For a fixed
// Z marginal r the feasible channels form two 2 x 3 transportation polytopes
// (one per A value); I(Y;Z) is convex in the channel, so the maximum is at a
// vertex, and every vertex is a greedy fill of the Y = 1 mass in some order.
double BruteForceEy(double p_a0, double p1_a0, double p1_a1, int grid) {
  const std::array<double, 2> pa = {p_a0, 1.0 - p_a0};
  const std::array<double, 2> y1 = {p_a0 * p1_a0, (1.0 - p_a0) * p1_a1};
  std::array<int, 3> perm = {0, 1, 2};
  std::vector<std::array<int, 3>> orders;
  do orders.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  const auto fill = [](const std::array<double, 3>& cap, double mass,
                       const std::array<int, 3>& order) {
    std::array<double, 3> out{};
    for (int z : order) {
      out[z] = std::min(cap[z], mass);
      mass -= out[z];
    }
    return out;
  };
  const auto h = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  double best = 0.0;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; i + j <= grid; ++j) {
      const std::array<double, 3> r = {double(i) / grid, double(j) / grid,
                                       double(grid - i - j) / grid};
      const std::array<double, 3> c0 = {pa[0] * r[0], pa[0] * r[1], pa[0] * r[2]};
      const std::array<double, 3> c1 = {pa[1] * r[0], pa[1] * r[1], pa[1] * r[2]};
      for (const auto& o0 : orders) {
        const auto m0 = fill(c0, y1[0], o0);
        for (const auto& o1 : orders) {
          const auto m1 = fill(c1, y1[1], o1);
          double hyz = 0.0, hz = 0.0, py1 = 0.0;
          for (int z = 0; z < 3; ++z) {
            const double one = m0[z] + m1[z];
            hyz += h(one) + h(std::max(0.0, r[z] - one));
            hz += h(r[z]);
            py1 += one;
          }
          best = std::max(best, h(py1) + h(1.0 - py1) + hz - hyz);
        }
      }
    }
  }
  return best;
}

TEST(Vertices, EyMatchesBruteForceOptimum) {
  const std::array<std::array<double, 3>, 3> joints = {
      {{0.5, 0.2, 0.8}, {0.673, 0.1, 0.5}, {0.3, 0.3, 0.6}}};
  for (const auto& j : joints) {
    const double brute = BruteForceEy(j[0], j[1], j[2], 50);
    const double closed = VertexEy(ClassificationPlane::FromProbabilities(j[0], j[1], j[2]));
    EXPECT_NEAR(brute, closed, 1e-9) << j[0] << " " << j[1] << " " << j[2];
  }
}

TEST(InnerPolygon, AdultHexagon) {
  const FeasiblePolygon poly = InnerPolygon(Adult());
  ASSERT_EQ(poly.vertices.size(), 6u);
  EXPECT_NEAR(poly.frontier_begin.utility, 0.6245678706120152, 1e-13);
  EXPECT_NEAR(poly.frontier_end.utility, 0.8041987508245549, 1e-13);
  EXPECT_NEAR(poly.frontier_end.leakage, 0.036683017163687714, 1e-13);
  EXPECT_NEAR(poly.vertices[5].leakage, 0.7236468563648266, 1e-13);
}

TEST(InnerPolygon, IndependentIsRectangle) {
  const ClassificationPlane p = ClassificationPlane::FromProbabilities(0.4, 0.3, 0.3);
  const FeasiblePolygon poly = InnerPolygon(p);
  ASSERT_EQ(poly.vertices.size(), 4u);
  EXPECT_NEAR(poly.vertices[1].utility, p.h_y, 1e-15);
  EXPECT_NEAR(poly.vertices[1].leakage, 0.0, 1e-15);
}

TEST(InnerPolygon, TargetEqualsAttributeCollapses) {
  const FeasiblePolygon poly =
      InnerPolygon(ClassificationPlane::FromProbabilities(0.5, 0.0, 1.0));
  // Only (0,0), (1,1) survive; E_Y* = 0 and E_A* = 1.
  ASSERT_EQ(poly.vertices.size(), 2u);
  EXPECT_NEAR(poly.vertices[1].utility, 1.0, 1e-12);
  EXPECT_NEAR(poly.vertices[1].leakage, 1.0, 1e-12);
}

TEST(ClassifyPoint, EaVertexIsOnFrontier) {
  const ClassificationPlane p = Adult();
  const PointClassification c = ClassifyPoint(p, Pt(p.h_y, p.i_ay));
  ASSERT_TRUE(c.statistic);
  EXPECT_NEAR(*c.statistic, 1.0, 1e-12);
  EXPECT_EQ(c.status, PointStatus::kFrontierOrBeyond);
  EXPECT_DOUBLE_EQ(c.frontier_distance, 0.0);
}

TEST(ClassifyPoint, OriginIsInterior) {
  const ClassificationPlane p = Adult();
  const PointClassification c = ClassifyPoint(p, Pt(0.0, 0.0));
  EXPECT_EQ(c.status, PointStatus::kInteriorSuboptimal);
  EXPECT_NEAR(*c.statistic, p.h_y / (p.delta_y_given_a * p.h_a), 1e-12);
  EXPECT_GT(c.frontier_distance, 0.6);
}

TEST(ClassifyPoint, AdultMlpPoint) {
  const PointClassification c = ClassifyPoint(Adult(), Pt(0.216, 0.092));
  EXPECT_NEAR(*c.statistic, 5.7824582600858045, 1e-12);
  EXPECT_NEAR(*c.statistic, 5.78, 0.005);
  EXPECT_EQ(c.status, PointStatus::kInteriorSuboptimal);
}

TEST(ClassifyPoint, OutsideRectangle) {
  EXPECT_EQ(ClassifyPoint(Adult(), Pt(0.9, 0.1)).status, PointStatus::kOutsideKnownBounds);
  EXPECT_EQ(ClassifyPoint(Adult(), Pt(0.5, -0.1)).status, PointStatus::kOutsideKnownBounds);
}

TEST(ClassifyPoint, DegeneratePlane) {
  const ClassificationPlane p = ClassificationPlane::FromProbabilities(0.4, 0.3, 0.3);
  EXPECT_EQ(ClassifyPoint(p, Pt(p.h_y, 0.0)).status, PointStatus::kFrontierOrBeyond);
  EXPECT_THROW(ClassifyPoint(p, Pt(0.1, 0.1)), NumericalError);
}

TEST(Certify, InfiniteSampleFrontierPointNotCertified) {
  // Z = Y on the Adult joint, tabulated as probabilities.
  const ContingencyTable ya = BernoulliJoint(0.673, 0.31, 0.113);
  std::vector<double> masses;
  for (int y = 0; y < 2; ++y)
    for (int a = 0; a < 2; ++a)
      for (int z = 0; z < 2; ++z) {
        const std::size_t idx[] = {std::size_t(y), std::size_t(a)};
        masses.push_back(z == y ? ya.at(idx) : 0.0);
      }
  const ContingencyTable yaz({{"y", {"0", "1"}}, {"a", {"0", "1"}}, {"z", {"0", "1"}}},
                             masses);
  CertifyOptions opts;
  opts.epsilon = 0.01;
  const Certificate c = Certify(yaz, opts);
  ASSERT_TRUE(c.statistic);
  EXPECT_NEAR(*c.statistic, 1.0, 1e-12);
  EXPECT_FALSE(c.suboptimal);
  EXPECT_EQ(c.bootstrap_used, 0);
  EXPECT_DOUBLE_EQ(c.threshold, 1.01);
}

TEST(Certify, IndependentRepresentationIsSuboptimal) {
  Rng rng(11);
  const std::int64_t n = 10000;
  std::vector<int> y(n), a(n), z(n);
  for (std::int64_t i = 0; i < n; ++i) {
    a[i] = OpenUniform(rng) < 0.5 ? 0 : 1;
    y[i] = OpenUniform(rng) < (a[i] == 0 ? 0.4 : 0.6) ? 1 : 0;
    z[i] = OpenUniform(rng) < 0.5 ? 0 : 1;
  }
  const ContingencyTable yaz = ContingencyTable::FromSymbols({"y", "a", "z"}, {y, a, z});
  CertifyOptions opts;
  opts.epsilon = 0.1;
  opts.bootstrap_resamples = 100;
  opts.seed = 5;
  const Certificate c = Certify(yaz, opts);
  EXPECT_TRUE(c.suboptimal);
  EXPECT_GT(*c.statistic, 2.0);
  EXPECT_EQ(c.bootstrap_used, 100);
  ASSERT_TRUE(c.bootstrap_stderr);
  EXPECT_GT(*c.bootstrap_stderr, 0.0);
  EXPECT_EQ(c.seed, 5u);
  const Certificate again = Certify(yaz, opts);
  EXPECT_EQ(*again.bootstrap_stderr, *c.bootstrap_stderr);
}

// Binary Z with Pr(Z=1 | first level) = t and Pr(Z=1 | second level) = 1 - t.
ContingencyTable Channel(const char* name, double m0, double m1, double t) {
  return ContingencyTable({{name, {"0", "1"}}, {"z", {"0", "1"}}},
                          {m0 * (1 - t), m0 * t, m1 * t, m1 * (1 - t)});
}

TEST(Certify, AdultMlpMarginalTables) {
  // t values solve I(A;Z) = 0.092 and I(Y;Z) = 0.216 on the Adult marginals.
  const double py1 = 0.673 * 0.31 + 0.327 * 0.113;
  const ContingencyTable az = Channel("a", 0.673, 0.327, 0.3122852237228514);
  const ContingencyTable yz = Channel("y", 1.0 - py1, py1, 0.19597255627323526);
  const ContingencyTable ay = BernoulliJoint(0.673, 0.31, 0.113).Transposed("y", "a");
  EXPECT_NEAR(MutualInformation(az, "a", "z"), 0.092, 1e-10);
  EXPECT_NEAR(MutualInformation(yz, "y", "z"), 0.216, 1e-10);
  CertifyOptions opts;
  opts.epsilon = 0.5;
  const Certificate c = Certify(az, ay, yz, opts);
  EXPECT_NEAR(*c.statistic, 5.7824582600858045, 1e-8);
  EXPECT_TRUE(c.suboptimal);
}

TEST(Certify, DegenerateDenominatorLeavesStatisticEmpty) {
  const ContingencyTable yaz = ContingencyTable::FromSymbols(
      {"y", "a", "z"}, {{0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 0}}, {2, 2, 1});
  const Certificate c = Certify(yaz, CertifyOptions{});
  EXPECT_FALSE(c.statistic);
  EXPECT_FALSE(c.suboptimal);
}

TEST(CostBounds, Cases) {
  const CostBounds adult = ClassificationCostBounds(Adult());
  EXPECT_NEAR(adult.invariance_cost_lower, 0.1796308802125397, 1e-13);
  EXPECT_NEAR(adult.privacy_leak_upper, 0.8751488620877829, 1e-13);
  const ClassificationPlane indep = ClassificationPlane::FromProbabilities(0.4, 0.3, 0.3);
  EXPECT_NEAR(ClassificationCostBounds(indep).invariance_cost_lower, 0.0, 1e-15);
  EXPECT_NEAR(ClassificationCostBounds(indep).privacy_leak_upper, indep.h_a, 1e-15);
  const CostBounds same =
      ClassificationCostBounds(ClassificationPlane::FromProbabilities(0.5, 0.0, 1.0));
  EXPECT_NEAR(same.invariance_cost_lower, 1.0, 1e-15);
  EXPECT_NEAR(same.privacy_leak_upper, 0.0, 1e-15);
}

TEST(DomainGeneralizationFloor, Cases) {
  EXPECT_NEAR(DomainGeneralizationFloor(Adult()), 0.1796308802125397, 1e-13);
  EXPECT_NEAR(DomainGeneralizationFloor(ClassificationPlane::FromProbabilities(0.4, 0.3, 0.3)),
              0.0, 1e-15);
  EXPECT_NEAR(DomainGeneralizationFloor(ClassificationPlane::FromProbabilities(0.5, 0.0, 1.0)),
              1.0, 1e-15);
}

double PlugInUtility(const ContingencyTable& yaz) {
  return MutualInformation(yaz.Marginal({"y", "z"}), "y", "z");
}

double PlugInLeakage(const ContingencyTable& yaz) {
  return MutualInformation(yaz.Marginal({"a", "z"}), "a", "z");
}

TEST(ThresholdAttainment, JointCases) {
  const ContingencyTable equal = ThresholdAttainmentJoint(0.5, 0.5, 0.5);
  EXPECT_NEAR(PlugInUtility(equal), 1.0, 1e-12);
  EXPECT_NEAR(PlugInLeakage(equal), 0.0, 1e-12);
  const ContingencyTable same = ThresholdAttainmentJoint(0.0, 1.0, 0.5);
  EXPECT_NEAR(PlugInUtility(same), 0.0, 1e-12);
  EXPECT_NEAR(PlugInLeakage(same), 0.0, 1e-12);
  const ContingencyTable adult = ThresholdAttainmentJoint(0.31, 0.113, 0.673);
  EXPECT_NEAR(PlugInUtility(adult), 0.6245678706120152, 1e-10);
  EXPECT_NEAR(PlugInLeakage(adult), 0.0, 1e-12);
}

TEST(ThresholdAttainment, SampleMatchesBinnedOracle) {
  const RepresentationSample s1 = ThresholdAttainmentSample(0.31, 0.113, 0.673, 200000, 7);
  const RepresentationSample s2 = ThresholdAttainmentSample(0.31, 0.113, 0.673, 200000, 7);
  EXPECT_TRUE(s1.z.isApprox(s2.z, 0.0));
  // Default discretization uses 59 equal-frequency bins here. The same joint
  // reduced to 59 equal-width cells carries 0.6137093484973333 bits.
  const PlanePoint p = EstimatePlanePoint(s1);
  EXPECT_NEAR(p.utility, 0.6137093484973333, 0.005);
  EXPECT_NEAR(p.leakage, 0.0, 0.002);
}

TEST(ThresholdAttainment, FinerBinsApproachClosedForm) {
  const RepresentationSample s = ThresholdAttainmentSample(0.31, 0.113, 0.673, 200000, 7);
  EstimatorConfig config;
  config.discretization_bins = 200;
  // 200 equal-width cells lose 0.00097 bits against the closed form.
  const PlanePoint p = EstimatePlanePoint(s, config);
  EXPECT_NEAR(p.utility, 0.6235933938042493, 0.005);
  EXPECT_NEAR(p.utility, 0.6245678706120152, 0.01);
}

}  // namespace
}  // namespace infoplane
