#include "infoplane/classification_plane.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "infoplane/error.h"
#include "infoplane/random.h"

namespace infoplane {

ClassificationPlane ClassificationPlane::FromJoint(const ContingencyTable& ya) {
  const ContingencyTable joint = ya.Marginal({"y", "a"});
  if (joint.axis_size(0) != 2 || joint.axis_size(1) != 2) {
    throw InputError("classification plane needs binary Y and A");
  }
  ClassificationPlane plane;
  plane.h_y = Entropy(joint.Marginal({"y"}));
  plane.h_a = Entropy(joint.Marginal({"a"}));
  plane.delta_y_given_a = DeltaConditional(joint, "y", "a");
  plane.delta_a_given_y = DeltaConditional(joint, "a", "y");
  plane.i_ay = MutualInformation(joint, "a", "y");
  return plane;
}

ContingencyTable BernoulliJoint(double p_a0, double p_y1_given_a0,
                                double p_y1_given_a1) {
  for (double p : {p_a0, p_y1_given_a0, p_y1_given_a1}) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("probabilities must lie in [0, 1]");
  }
  const double p_a1 = 1.0 - p_a0;
  // [y][a]
  std::vector<double> masses = {
      p_a0 * (1.0 - p_y1_given_a0), p_a1 * (1.0 - p_y1_given_a1),
      p_a0 * p_y1_given_a0, p_a1 * p_y1_given_a1};
  return ContingencyTable({{"y", {"0", "1"}}, {"a", {"0", "1"}}}, std::move(masses));
}

ClassificationPlane ClassificationPlane::FromProbabilities(
    double p_a0, double p_y1_given_a0, double p_y1_given_a1) {
  return FromJoint(BernoulliJoint(p_a0, p_y1_given_a0, p_y1_given_a1));
}

ClassificationPlane ClassificationPlane::Swapped() const {
  ClassificationPlane out = *this;
  std::swap(out.h_y, out.h_a);
  std::swap(out.delta_y_given_a, out.delta_a_given_y);
  return out;
}

void ClassificationPlane::Validate() const {
  const double tol = 1e-9;
  for (double v : {h_y, h_a, delta_y_given_a, delta_a_given_y, i_ay}) {
    if (!std::isfinite(v)) throw InputError("plane statistics must be finite");
  }
  if (h_y < 0.0 || h_a < 0.0 || h_y > 1.0 + tol || h_a > 1.0 + tol) {
    throw InputError("binary entropies must lie in [0, 1]");
  }
  if (delta_y_given_a < 0.0 || delta_y_given_a > 1.0 || delta_a_given_y < 0.0 ||
      delta_a_given_y > 1.0) {
    throw InputError("deltas must lie in [0, 1]");
  }
  if (i_ay < -tol || i_ay > std::min(h_y, h_a) + tol) {
    throw InputError("I(A;Y) must lie in [0, min(H(Y), H(A))]");
  }
}

double VertexEy(const ClassificationPlane& plane) {
  return std::max(0.0, plane.h_y - plane.delta_y_given_a * plane.h_a);
}

double VertexEa(const ClassificationPlane& plane) { return plane.i_ay; }

FeasiblePolygon InnerPolygon(const ClassificationPlane& plane) {
  plane.Validate();
  const double ey = VertexEy(plane);
  const double left = std::max(0.0, plane.h_a - plane.delta_a_given_y * plane.h_y);
  const auto pt = [](double u, double l) {
    return PlanePoint{u, l, TaskKind::kClassification};
  };
  const std::vector<PlanePoint> raw = {
      pt(0.0, 0.0),         pt(ey, 0.0),
      pt(plane.h_y, plane.i_ay), pt(plane.h_y, plane.h_a),
      pt(plane.i_ay, plane.h_a), pt(0.0, left)};
  const auto same = [](const PlanePoint& p, const PlanePoint& q) {
    return std::abs(p.utility - q.utility) <= kVertexMergeTolerance &&
           std::abs(p.leakage - q.leakage) <= kVertexMergeTolerance;
  };
  FeasiblePolygon polygon;
  for (const auto& p : raw) {
    if (polygon.vertices.empty() || !same(polygon.vertices.back(), p)) {
      polygon.vertices.push_back(p);
    }
  }
  while (polygon.vertices.size() > 1 &&
         same(polygon.vertices.back(), polygon.vertices.front())) {
    polygon.vertices.pop_back();
  }
  polygon.frontier_begin = raw[1];
  polygon.frontier_end = raw[2];
  return polygon;
}

std::string_view ToString(PointStatus status) {
  switch (status) {
    case PointStatus::kInteriorSuboptimal: return "interior-suboptimal";
    case PointStatus::kFrontierOrBeyond: return "frontier-or-beyond";
    case PointStatus::kOutsideKnownBounds: return "outside-known-bounds";
  }
  return "unknown";
}

namespace {

bool Degenerate(const ClassificationPlane& plane) {
  return plane.i_ay <= 1e-12 || plane.delta_y_given_a * plane.h_a <= 1e-12;
}

double SegmentDistance(double px, double py, double ax, double ay, double bx,
                       double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len_sq = dx * dx + dy * dy;
  double t = len_sq > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

}  // namespace

double SuboptimalityStatistic(const ClassificationPlane& plane,
                              const PlanePoint& point) {
  if (Degenerate(plane)) {
    throw NumericalError("no tradeoff: frontier reaches ideal corner");
  }
  const double h_y_given_z = std::max(0.0, plane.h_y - point.utility);
  return point.leakage / plane.i_ay +
         h_y_given_z / (plane.delta_y_given_a * plane.h_a);
}

PointClassification ClassifyPoint(const ClassificationPlane& plane,
                                  const PlanePoint& point) {
  plane.Validate();
  if (point.kind != TaskKind::kClassification) {
    throw InputError("classification plane needs a classification point");
  }
  const double tol = 1e-9;
  PointClassification out;
  if (Degenerate(plane)) {
    if (point.utility >= plane.h_y - tol && point.leakage <= tol) {
      out.status = point.utility > plane.h_y + tol
                       ? PointStatus::kOutsideKnownBounds
                       : PointStatus::kFrontierOrBeyond;
      return out;
    }
    throw NumericalError("no tradeoff: frontier reaches ideal corner");
  }
  const double ey = VertexEy(plane);
  out.statistic = SuboptimalityStatistic(plane, point);

  // Side of the chord (E_Y*, 0) -> (H(Y), I(A;Y)); positive toward (0, 0).
  const double dx = plane.h_y - ey, dy = plane.i_ay;
  const double cross = dx * point.leakage - dy * (point.utility - ey);
  const double len = std::hypot(dx, dy);
  const bool below_chord = len > 0.0 && cross / len < -tol;
  if (cross <= 0.0) {
    out.frontier_distance = 0.0;
  } else {
    out.frontier_distance =
        SegmentDistance(point.utility, point.leakage, ey, 0.0, plane.h_y, plane.i_ay);
  }

  if (point.utility > plane.h_y + tol || point.leakage > plane.h_a + tol ||
      point.utility < -tol || point.leakage < -tol || below_chord) {
    out.status = PointStatus::kOutsideKnownBounds;
  } else if (*out.statistic > 1.0 + 1e-12) {
    out.status = PointStatus::kInteriorSuboptimal;
  } else {
    out.status = PointStatus::kFrontierOrBeyond;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

std::optional<double> TableStatistic(const ContingencyTable& az,
                                     const ContingencyTable& ay,
                                     const ContingencyTable& yz, bool mm) {
  const double i_ay = MutualInformation(ay, "a", "y", mm);
  const ContingencyTable ya = ay.Marginal({"y", "a"});
  if (ya.axis_size(0) != 2 || ya.axis_size(1) != 2) {
    throw InputError("certification needs binary Y and A");
  }
  const auto& m = ya.masses();
  if (m[0] + m[2] <= 0.0 || m[1] + m[3] <= 0.0) return std::nullopt;
  const double delta = DeltaConditional(ya, "y", "a");
  const double h_a = Entropy(ya.Marginal({"a"}), mm);
  if (i_ay <= 1e-12 || delta * h_a <= 1e-12) return std::nullopt;
  const double i_az = MutualInformation(az, "a", "z", mm);
  const double h_y_given_z = ConditionalEntropy(yz, "y", "z", mm);
  return i_az / i_ay + h_y_given_z / (delta * h_a);
}

bool HoldsCounts(const ContingencyTable& table) {
  if (table.total() < 2.0) return false;
  for (double m : table.masses()) {
    if (m != std::floor(m)) return false;
  }
  return true;
}

ContingencyTable Resample(const ContingencyTable& table, Rng& rng) {
  const auto& masses = table.masses();
  auto remaining_n = static_cast<long long>(std::llround(table.total()));
  double remaining_mass = table.total();
  std::vector<double> out(masses.size(), 0.0);
  for (std::size_t i = 0; i < masses.size() && remaining_n > 0; ++i) {
    if (masses[i] <= 0.0) continue;
    const double p = std::clamp(masses[i] / remaining_mass, 0.0, 1.0);
    long long k = remaining_n;
    if (p < 1.0) {
      std::binomial_distribution<long long> draw(remaining_n, p);
      k = draw(rng);
    }
    out[i] = static_cast<double>(k);
    remaining_n -= k;
    remaining_mass -= masses[i];
  }
  return ContingencyTable(table.axes(), std::move(out));
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

template <typename Resampler>
Certificate BuildCertificate(std::optional<double> statistic, double n,
                             const CertifyOptions& options, bool bootstrap,
                             Resampler&& resample) {
  if (!(options.epsilon >= 0.0) || !std::isfinite(options.epsilon)) {
    throw InputError("epsilon must be finite and non-negative");
  }
  Certificate cert;
  cert.epsilon = options.epsilon;
  cert.threshold = 1.0 + options.epsilon;
  cert.n = n;
  cert.seed = options.seed;
  cert.statistic = statistic;
  std::ostringstream note;
  note << "n=" << FormatDouble(n) << ", epsilon=" << FormatDouble(options.epsilon);
  if (!statistic) {
    note << "; denominator degenerate at this sample";
    cert.confidence_note = note.str();
    return cert;
  }
  cert.suboptimal = *statistic > cert.threshold;

  if (bootstrap && options.bootstrap_resamples > 0) {
    Rng rng(options.seed);
    std::vector<double> draws;
    draws.reserve(options.bootstrap_resamples);
    for (int b = 0; b < options.bootstrap_resamples; ++b) {
      const std::optional<double> s = resample(rng);
      if (s) draws.push_back(*s);
    }
    cert.bootstrap_used = static_cast<int>(draws.size());
    if (draws.size() >= 2) {
      double mean = 0.0;
      for (double d : draws) mean += d;
      mean /= static_cast<double>(draws.size());
      double ss = 0.0;
      for (double d : draws) ss += (d - mean) * (d - mean);
      cert.bootstrap_stderr = std::sqrt(ss / static_cast<double>(draws.size() - 1));
      note << "; bootstrap standard error " << FormatDouble(*cert.bootstrap_stderr)
           << " from " << draws.size() << " of " << options.bootstrap_resamples
           << " resamples (seed " << options.seed << ")";
    } else {
      note << "; bootstrap produced too few non-degenerate resamples";
    }
  } else if (!bootstrap) {
    note << "; masses are not integer counts, bootstrap skipped";
  }
  note << "; verdict uses statistic > 1 + epsilon only";
  cert.confidence_note = note.str();
  return cert;
}

}  // namespace

Certificate Certify(const ContingencyTable& yaz, const CertifyOptions& options) {
  const bool mm = options.miller_madow;
  const auto statistic_of = [mm](const ContingencyTable& t) {
    return TableStatistic(t.Marginal({"a", "z"}), t.Marginal({"a", "y"}),
                          t.Marginal({"y", "z"}), mm);
  };
  if (yaz.total() <= 0.0) throw InputError("empty distribution");
  return BuildCertificate(statistic_of(yaz), yaz.total(), options, HoldsCounts(yaz),
                          [&](Rng& rng) { return statistic_of(Resample(yaz, rng)); });
}

Certificate Certify(const ContingencyTable& table_az,
                    const ContingencyTable& table_ay,
                    const ContingencyTable& table_yz,
                    const CertifyOptions& options) {
  const double n = table_ay.total();
  if (n <= 0.0) throw InputError("empty distribution");
  for (const auto* t : {&table_az, &table_yz}) {
    if (std::abs(t->total() - n) > 1e-9 * std::max(1.0, n)) {
      throw InputError("certification tables must share the same total");
    }
  }
  const bool mm = options.miller_madow;
  const bool counts =
      HoldsCounts(table_az) && HoldsCounts(table_ay) && HoldsCounts(table_yz);
  return BuildCertificate(
      TableStatistic(table_az, table_ay, table_yz, mm), n, options, counts,
      [&](Rng& rng) {
        const ContingencyTable az = Resample(table_az, rng);
        const ContingencyTable ay = Resample(table_ay, rng);
        const ContingencyTable yz = Resample(table_yz, rng);
        return TableStatistic(az, ay, yz, mm);
      });
}

CostBounds ClassificationCostBounds(const ClassificationPlane& plane) {
  return {plane.delta_y_given_a * plane.h_a, std::max(0.0, plane.h_a - plane.i_ay)};
}

double DomainGeneralizationFloor(const ClassificationPlane& plane) {
  return plane.delta_y_given_a * plane.h_a;
}

// ---------------------------------------------------------------------------
// Threshold construction

namespace {

void CheckThresholdArgs(double alpha, double beta, double p_a) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    throw InputError("thresholds must lie in [0, 1]");
  }
  if (!(p_a > 0.0 && p_a < 1.0)) throw InputError("p_a must lie in (0, 1)");
}

}  // namespace

RepresentationSample ThresholdAttainmentSample(double alpha, double beta,
                                               double p_a, std::int64_t n,
                                               std::uint64_t seed) {
  CheckThresholdArgs(alpha, beta, p_a);
  if (n < 1) throw InputError("n must be at least 1");
  Rng rng(seed);
  RepresentationSample sample;
  sample.kind = TaskKind::kClassification;
  sample.z.resize(n, 1);
  sample.y.resize(n);
  sample.a.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double z = OpenUniform(rng);
    const int a = OpenUniform(rng) < p_a ? 0 : 1;
    const bool y = a == 0 ? z <= alpha : z <= beta;
    sample.z(i, 0) = z;
    sample.a(i) = a;
    sample.y(i) = y ? 1.0 : 0.0;
  }
  return sample;
}

ContingencyTable ThresholdAttainmentJoint(double alpha, double beta, double p_a) {
  CheckThresholdArgs(alpha, beta, p_a);
  const double lo = std::min(alpha, beta);
  const double hi = std::max(alpha, beta);
  const double width[3] = {lo, hi - lo, 1.0 - hi};
  const double p_group[2] = {p_a, 1.0 - p_a};
  const double threshold[2] = {alpha, beta};
  // Representative point of each interval decides Y for each group.
  const double probe[3] = {lo * 0.5, 0.5 * (lo + hi), 0.5 * (hi + 1.0)};
  std::vector<double> masses(2 * 2 * 3, 0.0);  // [y][a][z]
  for (int a = 0; a < 2; ++a) {
    for (int z = 0; z < 3; ++z) {
      const int y = probe[z] <= threshold[a] ? 1 : 0;
      masses[(y * 2 + a) * 3 + z] += p_group[a] * width[z];
    }
  }
  return ContingencyTable({{"y", {"0", "1"}},
                           {"a", {"0", "1"}},
                           {"z", {"low", "mid", "high"}}},
                          std::move(masses));
}

}  // namespace infoplane
