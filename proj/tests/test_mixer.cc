#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "infoplane/classification_plane.h"
#include "infoplane/error.h"
#include "infoplane/mixer.h"
#include "test_support.h"

namespace infoplane {
namespace {

double Utility(const ContingencyTable& yaz) {
  return MutualInformation(yaz.Marginal({"y", "z"}), "y", "z");
}
double Leakage(const ContingencyTable& yaz) {
  return MutualInformation(yaz.Marginal({"a", "z"}), "a", "z");
}

// Z = Y on the Adult joint.
ContingencyTable FullInformation() {
  const ContingencyTable ya = BernoulliJoint(0.673, 0.31, 0.113);
  std::vector<double> masses;
  for (std::size_t y = 0; y < 2; ++y)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t z = 0; z < 2; ++z) {
        const std::size_t idx[] = {y, a};
        masses.push_back(z == y ? ya.at(idx) : 0.0);
      }
  return ContingencyTable({{"y", {"0", "1"}}, {"a", {"0", "1"}}, {"z", {"0", "1"}}}, masses);
}

TEST(MixTables, LinearInBothCoordinates) {
  const ContingencyTable t0 = FullInformation();
  const ContingencyTable t1 = ThresholdAttainmentJoint(0.31, 0.113, 0.673);
  for (double u : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const ContingencyTable mixed = MixTables(t0, t1, u);
    EXPECT_NEAR(Utility(mixed), u * Utility(t0) + (1 - u) * Utility(t1), 1e-12) << u;
    EXPECT_NEAR(Leakage(mixed), u * Leakage(t0) + (1 - u) * Leakage(t1), 1e-12) << u;
  }
}

TEST(MixTables, LabelsCarrySelector) {
  const ContingencyTable mixed = MixTables(FullInformation(), FullInformation(), 0.5);
  const auto& labels = mixed.axes()[mixed.AxisIndex("z")].labels;
  ASSERT_EQ(labels.size(), 4u);
  EXPECT_EQ(labels[0], "s1:0");
  EXPECT_EQ(labels[3], "s0:1");
}

TEST(MixTables, RejectsDifferentMarginals) {
  const ContingencyTable other = ThresholdAttainmentJoint(0.2, 0.8, 0.5);
  EXPECT_THROW(MixTables(FullInformation(), other, 0.5), InputError);
  EXPECT_THROW(MixTables(FullInformation(), FullInformation(), 1.5), InputError);
}

TEST(MixedGroupedVariance, LinearInU) {
  Rng rng(2);
  const int n = 500;
  std::vector<int> g0(n), g1(n);
  std::vector<double> v(n), w(n);
  for (int i = 0; i < n; ++i) {
    g0[i] = i % 7;
    g1[i] = i % 3;
    v[i] = testing::Uniform(rng, -1, 2) + 0.3 * (i % 7);
    w[i] = testing::Uniform(rng, 0.5, 1.5);
  }
  const double v0 = GroupedConditionalMeanVariance(g0, v, w);
  const double v1 = GroupedConditionalMeanVariance(g1, v, w);
  for (double u : {0.0, 0.3, 0.7, 1.0}) {
    EXPECT_NEAR(MixedGroupedVariance(g0, g1, v, w, u), u * v0 + (1 - u) * v1, 1e-12);
  }
}

RepresentationSample YEqualsA(int n, std::uint64_t seed, bool constant) {
  Rng rng(seed);
  RepresentationSample s;
  s.kind = TaskKind::kClassification;
  s.z.resize(n, 1);
  s.y.resize(n);
  s.a.resize(n);
  for (int i = 0; i < n; ++i) {
    s.y(i) = s.a(i) = OpenUniform(rng) < 0.5 ? 0.0 : 1.0;
    s.z(i, 0) = constant ? 0.0 : s.y(i);
  }
  return s;
}

TEST(Mix, EndpointsKeepOneRepresentation) {
  const RepresentationSample r0 = YEqualsA(1000, 1, false);
  RepresentationSample r1 = r0;
  r1.z.setZero();
  const MixedRepresentation m1 = Mix(r0, r1, 1.0, 3);
  EXPECT_EQ(std::accumulate(m1.selector.begin(), m1.selector.end(), 0), 1000);
  EXPECT_TRUE(m1.sample.z.leftCols(1).isApprox(r0.z, 0.0));
  EXPECT_TRUE(m1.sample.z.col(1).isApproxToConstant(1.0));
  const MixedRepresentation m0 = Mix(r0, r1, 0.0, 3);
  EXPECT_EQ(std::accumulate(m0.selector.begin(), m0.selector.end(), 0), 0);
  const PlanePoint p1 = EstimatePlanePoint(m1.sample);
  const PlanePoint q1 = EstimatePlanePoint(r0);
  EXPECT_DOUBLE_EQ(p1.utility, q1.utility);
  EXPECT_DOUBLE_EQ(p1.leakage, q1.leakage);
}

TEST(Mix, HalfwayBetweenCorners) {
  const RepresentationSample r0 = YEqualsA(200000, 4, false);
  RepresentationSample r1 = r0;
  r1.z.setZero();
  const MixedRepresentation m = Mix(r0, r1, 0.5, 8);
  const double mean = std::accumulate(m.selector.begin(), m.selector.end(), 0.0) / 200000.0;
  EXPECT_LE(std::abs(mean - 0.5), 3.0 * std::sqrt(0.25 / 200000.0));
  const PlanePoint p = EstimatePlanePoint(m.sample);
  EXPECT_NEAR(p.utility, 0.5, 0.01);
  EXPECT_NEAR(p.leakage, 0.5, 0.01);
}

TEST(Mix, RowsMatchSelectedComponent) {
  const RepresentationSample r0 = YEqualsA(300, 5, false);
  RepresentationSample r1 = r0;
  r1.z = Eigen::MatrixXd::Constant(300, 2, 7.0);
  const MixedRepresentation m = Mix(r0, r1, 0.4, 1);
  ASSERT_EQ(m.sample.z.cols(), 3);
  for (int i = 0; i < 300; ++i) {
    if (m.selector[i] == 1) {
      EXPECT_EQ(m.sample.z(i, 0), r0.z(i, 0));
      EXPECT_EQ(m.sample.z(i, 1), 0.0);
    } else {
      EXPECT_EQ(m.sample.z(i, 0), 7.0);
      EXPECT_EQ(m.sample.z(i, 1), 7.0);
    }
    EXPECT_EQ(m.sample.z(i, 2), m.selector[i]);
  }
}

TEST(Mix, RejectsMismatchedRows) {
  const RepresentationSample r0 = YEqualsA(100, 1, false);
  const RepresentationSample r1 = YEqualsA(100, 2, false);
  EXPECT_THROW(Mix(r0, r1, 0.5, 0), InputError);
}

TEST(MixCurve, EndpointsAndLinearity) {
  const RepresentationSample r0 = YEqualsA(200000, 6, false);
  RepresentationSample r1 = r0;
  r1.z.setZero();
  const auto curve = MixCurve(r0, r1, 5, 10);
  ASSERT_EQ(curve.size(), 5u);
  EXPECT_DOUBLE_EQ(curve.front().second.utility, 0.0);
  EXPECT_DOUBLE_EQ(curve.back().second.utility, EstimatePlanePoint(r0).utility);
  // Least-squares line of utility against u.
  double su = 0, sv = 0, suu = 0, suv = 0, svv = 0;
  for (const auto& [u, p] : curve) {
    su += u;
    sv += p.utility;
    suu += u * u;
    suv += u * p.utility;
    svv += p.utility * p.utility;
  }
  const double n = curve.size();
  const double r = (n * suv - su * sv) / std::sqrt((n * suu - su * su) * (n * svv - sv * sv));
  EXPECT_GE(r * r, 0.99);
}

}  // namespace
}  // namespace infoplane
