#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infoplane/metrics.h"

namespace infoplane {

// Sufficient statistics of a binary (Y, A) pair, in bits.
struct ClassificationPlane {
  double h_y = 0.0;
  double h_a = 0.0;
  double delta_y_given_a = 0.0;
  double delta_a_given_y = 0.0;
  double i_ay = 0.0;

  // `ya` must contain binary axes named "y" and "a".
  static ClassificationPlane FromJoint(const ContingencyTable& ya);
  static ClassificationPlane FromProbabilities(double p_a0, double p_y1_given_a0,
                                               double p_y1_given_a1);

  // Roles of Y and A exchanged.
  ClassificationPlane Swapped() const;
  void Validate() const;
};

// Y x A table from Pr(A = 0) and the two conditional base rates.
ContingencyTable BernoulliJoint(double p_a0, double p_y1_given_a0,
                                double p_y1_given_a1);

// Largest I(Y;Z) with I(A;Z) = 0, clamped at 0.
double VertexEy(const ClassificationPlane& plane);
// Smallest I(A;Z) with I(Y;Z) = H(Y).
double VertexEa(const ClassificationPlane& plane);

// Vertex merge tolerance in bits.
inline constexpr double kVertexMergeTolerance = 1e-9;

struct FeasiblePolygon {
  std::vector<PlanePoint> vertices;  // counter-clockwise, duplicates merged
  PlanePoint frontier_begin;         // (E_Y*, 0)
  PlanePoint frontier_end;           // (H(Y), I(A;Y))
};

FeasiblePolygon InnerPolygon(const ClassificationPlane& plane);

enum class PointStatus { kInteriorSuboptimal, kFrontierOrBeyond, kOutsideKnownBounds };
std::string_view ToString(PointStatus status);

struct PointClassification {
  PointStatus status = PointStatus::kFrontierOrBeyond;
  std::optional<double> statistic;  // empty on a degenerate plane
  double frontier_distance = 0.0;
};

// I(A;Z)/I(A;Y) + H(Y|Z)/(delta H(A)) at the plane point. Throws
// NumericalError when either denominator vanishes.
double SuboptimalityStatistic(const ClassificationPlane& plane,
                              const PlanePoint& point);

PointClassification ClassifyPoint(const ClassificationPlane& plane,
                                  const PlanePoint& point);

struct CertifyOptions {
  double epsilon = 0.05;
  int bootstrap_resamples = 1000;
  std::uint64_t seed = 0;
  bool miller_madow = false;
};

struct Certificate {
  std::optional<double> statistic;
  double threshold = 0.0;
  double epsilon = 0.0;
  bool suboptimal = false;
  double n = 0.0;
  std::optional<double> bootstrap_stderr;
  int bootstrap_used = 0;
  std::uint64_t seed = 0;
  std::string confidence_note;
};

// Plug-in certificate from a Y x A x Z table (axes "y", "a", "z").
Certificate Certify(const ContingencyTable& yaz, const CertifyOptions& options);

// Same statistic from three separately tabulated marginals: A x Z, A x Y
// (axes "a", "y") and Y x Z. Each table is resampled on its own for the
// bootstrap.
Certificate Certify(const ContingencyTable& table_az,
                    const ContingencyTable& table_ay,
                    const ContingencyTable& table_yz,
                    const CertifyOptions& options);

struct CostBounds {
  double invariance_cost_lower = 0.0;  // delta H(A)
  double privacy_leak_upper = 0.0;     // H(A) - I(A;Y)
};
CostBounds ClassificationCostBounds(const ClassificationPlane& plane);

// Weighted error floor across two domains indexed by A.
double DomainGeneralizationFloor(const ClassificationPlane& plane);

// Z ~ U(0,1), A independent with Pr(A = 0) = p_a, and
// Y = 1 iff (Z <= alpha and A = 0) or (Z <= beta and A = 1).
RepresentationSample ThresholdAttainmentSample(double alpha, double beta,
                                               double p_a, std::int64_t n,
                                               std::uint64_t seed);

// Exact Y x A x Z joint of the same construction with Z reduced to the three
// intervals cut at min(alpha, beta) and max(alpha, beta).
ContingencyTable ThresholdAttainmentJoint(double alpha, double beta, double p_a);

}  // namespace infoplane
