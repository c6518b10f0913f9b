#include "infoplane/mixer.h"

#include <algorithm>
#include <cmath>

#include "infoplane/error.h"
#include "infoplane/random.h"

namespace infoplane {

namespace {

void CheckWeight(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw InputError("mixing weight u must lie in [0, 1]");
}

}  // namespace

MixedRepresentation Mix(const RepresentationSample& rep0,
                        const RepresentationSample& rep1, double u,
                        std::uint64_t seed) {
  CheckWeight(u);
  rep0.Validate();
  rep1.Validate();
  if (rep0.size() != rep1.size()) throw InputError("representations differ in N");
  if (rep0.kind != rep1.kind) throw InputError("representations differ in task kind");
  if (rep0.y != rep1.y || rep0.a != rep1.a) {
    throw InputError("representations must share y and a");
  }
  const Eigen::Index n = rep0.size();
  const Eigen::Index width = std::max(rep0.z.cols(), rep1.z.cols());
  MixedRepresentation out;
  out.weight_u = u;
  out.seed = seed;
  out.selector.resize(n);
  out.sample.kind = rep0.kind;
  out.sample.y = rep0.y;
  out.sample.a = rep0.a;
  out.sample.z = Eigen::MatrixXd::Zero(n, width + 1);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool first = OpenUniform(rng) <= u;
    const RepresentationSample& src = first ? rep0 : rep1;
    out.sample.z.row(i).head(src.z.cols()) = src.z.row(i);
    out.sample.z(i, width) = first ? 1.0 : 0.0;
    out.selector[i] = first ? 1 : 0;
  }
  return out;
}

ContingencyTable MixTables(const ContingencyTable& yaz0,
                           const ContingencyTable& yaz1, double u) {
  CheckWeight(u);
  const ContingencyTable t0 = yaz0.Marginal({"y", "a", "z"});
  const ContingencyTable t1 = yaz1.Marginal({"y", "a", "z"});
  if (t0.total() <= 0.0 || t1.total() <= 0.0) throw InputError("empty distribution");
  const ContingencyTable ya0 = t0.Marginal({"y", "a"});
  const ContingencyTable ya1 = t1.Marginal({"y", "a"});
  if (ya0.axis_size(0) != ya1.axis_size(0) || ya0.axis_size(1) != ya1.axis_size(1)) {
    throw InputError("joints differ in their Y x A alphabets");
  }
  for (std::size_t i = 0; i < ya0.masses().size(); ++i) {
    const double p0 = ya0.masses()[i] / t0.total();
    const double p1 = ya1.masses()[i] / t1.total();
    if (std::abs(p0 - p1) > 1e-12) throw InputError("joints differ in their Y x A marginal");
  }
  const std::size_t ny = t0.axis_size(0), na = t0.axis_size(1);
  const std::size_t nz0 = t0.axis_size(2), nz1 = t1.axis_size(2);
  TableAxis z_axis{"z", {}};
  for (const auto& l : t0.axes()[2].labels) z_axis.labels.push_back("s1:" + l);
  for (const auto& l : t1.axes()[2].labels) z_axis.labels.push_back("s0:" + l);
  const std::size_t nz = nz0 + nz1;
  std::vector<double> masses(ny * na * nz, 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t z = 0; z < nz0; ++z) {
        masses[(y * na + a) * nz + z] =
            u * t0.masses()[(y * na + a) * nz0 + z] / t0.total();
      }
      for (std::size_t z = 0; z < nz1; ++z) {
        masses[(y * na + a) * nz + nz0 + z] =
            (1.0 - u) * t1.masses()[(y * na + a) * nz1 + z] / t1.total();
      }
    }
  }
  return ContingencyTable({t0.axes()[0], t0.axes()[1], std::move(z_axis)},
                          std::move(masses));
}

double MixedGroupedVariance(std::span<const int> groups0,
                            std::span<const int> groups1,
                            std::span<const double> values,
                            std::span<const double> weights, double u) {
  CheckWeight(u);
  const std::size_t n = values.size();
  if (groups0.size() != n || groups1.size() != n ||
      (!weights.empty() && weights.size() != n)) {
    throw InputError("group, value and weight lengths differ");
  }
  int offset = 0;
  for (int g : groups0) offset = std::max(offset, g + 1);
  std::vector<int> groups;
  std::vector<double> vals, w;
  groups.reserve(2 * n);
  vals.reserve(2 * n);
  w.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weights.empty() ? 1.0 : weights[i];
    groups.push_back(groups0[i]);
    vals.push_back(values[i]);
    w.push_back(u * wi);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weights.empty() ? 1.0 : weights[i];
    groups.push_back(offset + groups1[i]);
    vals.push_back(values[i]);
    w.push_back((1.0 - u) * wi);
  }
  return GroupedConditionalMeanVariance(groups, vals, w);
}

std::vector<std::pair<double, PlanePoint>> MixCurve(
    const RepresentationSample& rep0, const RepresentationSample& rep1,
    int num_points, std::uint64_t seed, const EstimatorConfig& config) {
  if (num_points < 2) throw InputError("mix curve needs at least two points");
  std::vector<std::pair<double, PlanePoint>> out;
  for (int i = 0; i < num_points; ++i) {
    const double u = static_cast<double>(i) / (num_points - 1);
    const MixedRepresentation mixed = Mix(rep0, rep1, u, seed + i);
    out.emplace_back(u, EstimatePlanePoint(mixed.sample, config));
  }
  return out;
}

}  // namespace infoplane
