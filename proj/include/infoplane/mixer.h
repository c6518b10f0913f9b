#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "infoplane/metrics.h"

namespace infoplane {

struct MixedRepresentation {
  // z = (selected row zero-padded to max(d0, d1), S); the last column is S.
  RepresentationSample sample;
  std::vector<int> selector;  // 1 where rep0's row was taken
  double weight_u = 0.0;
  std::uint64_t seed = 0;
};

// Row-wise: draw U ~ U(0,1) and keep rep0's encoding iff U <= u.
MixedRepresentation Mix(const RepresentationSample& rep0,
                        const RepresentationSample& rep1, double u,
                        std::uint64_t seed);

// Population-level mix of two Y x A x Z joints sharing their Y x A marginal.
// The result's "z" axis is (S, Z): labels "s1:<z0 label>" then "s0:<z1 label>".
ContingencyTable MixTables(const ContingencyTable& yaz0,
                           const ContingencyTable& yaz1, double u);

// VarE[V | Z_mix] for two group-by encodings of the same weighted rows.
double MixedGroupedVariance(std::span<const int> groups0,
                            std::span<const int> groups1,
                            std::span<const double> values,
                            std::span<const double> weights, double u);

// Plane points of Mix at u = i / (num_points - 1), seed + i for point i.
std::vector<std::pair<double, PlanePoint>> MixCurve(
    const RepresentationSample& rep0, const RepresentationSample& rep1,
    int num_points, std::uint64_t seed, const EstimatorConfig& config = {});

}  // namespace infoplane
