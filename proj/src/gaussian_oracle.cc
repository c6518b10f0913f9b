#include "infoplane/gaussian_oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "infoplane/error.h"
#include "infoplane/linalg.h"
#include "infoplane/random.h"

namespace infoplane {

void GaussianModel::Validate() const {
  const Eigen::Index d = sigma.rows();
  if (d < 1 || sigma.cols() != d) throw InputError("sigma must be a square matrix");
  if (mean.size() != d || a.size() != d || y.size() != d) {
    throw InputError("mean, a and y must have length dim");
  }
  if (!sigma.allFinite() || !mean.allFinite() || !a.allFinite() || !y.allFinite()) {
    throw InputError("model entries must be finite");
  }
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InputError("sigma is not symmetric");
  }
  if (SortedSpectrum(sigma).values.minCoeff() < -1e-10 * scale) {
    throw NumericalError("sigma is not positive semidefinite");
  }
  if (a.isZero(0.0) || y.isZero(0.0)) throw InputError("a and y must be nonzero");
}

RegressionPlane GaussianModel::Plane() const {
  const Eigen::MatrixXd s = 0.5 * (sigma + sigma.transpose());
  RegressionPlane plane;
  plane.var_y = std::max(0.0, y.dot(s * y));
  plane.var_a = std::max(0.0, a.dot(s * a));
  plane.cov_ya = a.dot(s * y);
  if (plane.var_y == 0.0 || plane.var_a == 0.0) plane.cov_ya = 0.0;
  const double bound = std::sqrt(plane.var_y * plane.var_a);
  plane.cov_ya = std::clamp(plane.cov_ya, -bound, bound);
  return plane;
}

Whitening Whiten(const GaussianModel& model) {
  model.Validate();
  const MatrixRoot root = PsdRoot(model.sigma);
  return {root.half * model.a, root.half * model.y, root.half, root.half_pinv};
}

void ConstructedRepresentation::Validate(Eigen::Index dim) const {
  if (components.empty()) throw InputError("representation has no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (c.linear_map.cols() != dim) throw InputError("linear map width must equal dim");
    if (!(c.weight >= 0.0)) throw InputError("component weights must be non-negative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("component weights must sum to 1");
}

ConstructedRepresentation ConstantRepresentation(Eigen::Index dim) {
  ConstructedRepresentation rep;
  rep.components.push_back({Eigen::MatrixXd::Zero(dim, dim), 1.0});
  return rep;
}

ConstructedRepresentation IdentityRepresentation(Eigen::Index dim) {
  ConstructedRepresentation rep;
  rep.components.push_back({Eigen::MatrixXd::Identity(dim, dim), 1.0});
  return rep;
}

namespace {

// L = P Sigma^(-1/2) realizes VarE[phi | L phi] = Sigma^(1/2) P Sigma^(1/2)
// for a whitened projection P inside the range of Sigma.
ConstructedRepresentation FromWhitenedProjection(const Whitening& w,
                                                 const Eigen::MatrixXd& projection) {
  ConstructedRepresentation rep;
  rep.components.push_back({projection * w.sigma_half_inv, 1.0});
  return rep;
}

bool Negligible(const Eigen::VectorXd& whitened, const GaussianModel& model,
                const Eigen::VectorXd& raw) {
  const double scale = std::max(1e-300, model.sigma.cwiseAbs().maxCoeff() * raw.squaredNorm());
  return whitened.squaredNorm() <= 1e-14 * scale;
}

}  // namespace

ConstructedRepresentation ConstructInvariantOptimal(const GaussianModel& model) {
  const Whitening w = Whiten(model);
  if (Negligible(w.a_prime, model, model.a)) {
    throw NumericalError("A carries no variance; constraint vacuous");
  }
  const Eigen::VectorXd a0 = w.a_prime.normalized();
  const MatrixRoot root = PsdRoot(model.sigma);
  return FromWhitenedProjection(w, root.range_projector - a0 * a0.transpose());
}

ConstructedRepresentation ConstructSufficiencyOptimal(const GaussianModel& model) {
  const Whitening w = Whiten(model);
  if (Negligible(w.y_prime, model, model.y)) {
    throw NumericalError("Y carries no variance; constraint vacuous");
  }
  const Eigen::VectorXd y0 = w.y_prime.normalized();
  return FromWhitenedProjection(w, y0 * y0.transpose());
}

ConstructedRepresentation ConstructLagrangianOptimal(const GaussianModel& model,
                                                     double lambda) {
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  const Whitening w = Whiten(model);
  const Eigen::MatrixXd r = lambda * w.a_prime * w.a_prime.transpose() -
                            w.y_prime * w.y_prime.transpose();
  const SymmetricSpectrum spectrum = SortedSpectrum(r);
  const Eigen::Index d = spectrum.values.size();
  if (spectrum.values(d - 1) >= 0.0) return ConstantRepresentation(model.dim());
  const Eigen::VectorXd u = spectrum.vectors.col(d - 1);
  return FromWhitenedProjection(w, u * u.transpose());
}

Eigen::MatrixXd Rank1LinearMap(const GaussianModel& model, Eigen::Index j) {
  model.Validate();
  if (j < 0 || j >= model.dim()) throw InputError("eigen-index out of range");
  const SymmetricSpectrum spectrum = SortedSpectrum(model.sigma);
  const double max_sv = std::max(0.0, spectrum.values(0));
  const double sigma_j = spectrum.values(j);
  if (!(sigma_j > max_sv * kPinvRelativeCutoff) || max_sv == 0.0) {
    throw NumericalError("target outside range of Σ");
  }
  const Eigen::VectorXd u = spectrum.vectors.col(j);
  return std::sqrt(sigma_j) * u * u.transpose();
}

ConstructedRepresentation RealizePsdTarget(const GaussianModel& model,
                                           const Eigen::MatrixXd& target) {
  model.Validate();
  const Eigen::Index d = model.dim();
  if (target.rows() != d || target.cols() != d || !target.allFinite()) {
    throw InputError("target must be a finite dim x dim matrix");
  }
  const double scale = std::max(1.0, model.sigma.cwiseAbs().maxCoeff());
  if ((target - target.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NumericalError("target is not symmetric");
  }
  const Eigen::MatrixXd m = 0.5 * (target + target.transpose());
  if (SortedSpectrum(m).values.minCoeff() < -1e-9 * scale) {
    throw NumericalError("target is not positive semidefinite");
  }
  if (SortedSpectrum(model.sigma - m).values.minCoeff() < -1e-9 * scale) {
    throw NumericalError("target exceeds sigma");
  }

  // Eigenbasis of sigma, rotated inside each repeated eigenvalue so that the
  // target's block is diagonal too.
  const SymmetricSpectrum sigma_spec = SortedSpectrum(model.sigma);
  Eigen::MatrixXd basis = sigma_spec.vectors;
  const Eigen::VectorXd& sig = sigma_spec.values;
  for (Eigen::Index begin = 0; begin < d;) {
    Eigen::Index end = begin + 1;
    while (end < d && std::abs(sig(end) - sig(begin)) <= 1e-12 * scale) ++end;
    if (end - begin > 1) {
      const Eigen::MatrixXd block_basis = basis.middleCols(begin, end - begin);
      const Eigen::MatrixXd block = block_basis.transpose() * m * block_basis;
      basis.middleCols(begin, end - begin) =
          block_basis * SortedSpectrum(block).vectors;
    }
    begin = end;
  }
  const Eigen::MatrixXd in_basis = basis.transpose() * m * basis;
  const Eigen::MatrixXd off = in_basis - Eigen::MatrixXd(in_basis.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw InputError("target is not diagonal in an eigenbasis of sigma");
  }

  const double max_sv = std::max(0.0, sig(0));
  std::vector<Eigen::Index> dirs;
  std::vector<double> ratio;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(sig(i) > max_sv * kPinvRelativeCutoff)) continue;  // kernel direction
    dirs.push_back(i);
    ratio.push_back(std::clamp(in_basis(i, i) / sig(i), 0.0, 1.0));
  }

  ConstructedRepresentation rep;
  rep.scale = std::accumulate(ratio.begin(), ratio.end(), 0.0);
  if (rep.scale > 0.0) {
    for (double r : ratio) rep.proof_weights.push_back(r / rep.scale);
  }
  const auto rank1 = [&](Eigen::Index i) {
    const Eigen::VectorXd u = basis.col(i);
    return Eigen::MatrixXd(std::sqrt(sig(i)) * u * u.transpose());
  };

  double used = 0.0;
  if (std::abs(rep.scale - 1.0) <= 1e-12) {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      if (rep.proof_weights[k] > 0.0) {
        rep.components.push_back({rank1(dirs[k]), rep.proof_weights[k]});
        used += rep.proof_weights[k];
      }
    }
  } else if (rep.scale < 1.0) {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      if (ratio[k] > 0.0) {
        rep.components.push_back({rank1(dirs[k]), ratio[k]});
        used += ratio[k];
      }
    }
  } else {
    // Nested projections onto the j directions with the largest ratios.
    std::vector<std::size_t> order(dirs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return ratio[l] > ratio[r]; });
    Eigen::MatrixXd nested = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t j = 0; j < order.size(); ++j) {
      nested += rank1(dirs[order[j]]);
      const double next = j + 1 < order.size() ? ratio[order[j + 1]] : 0.0;
      const double w = ratio[order[j]] - next;
      if (w > 0.0) {
        rep.components.push_back({nested, w});
        used += w;
      }
    }
  }
  const double rest = 1.0 - used;
  if (rest > 1e-15 || rep.components.empty()) {
    rep.components.push_back({Eigen::MatrixXd::Zero(d, d), std::max(0.0, rest)});
  }
  // Absorb rounding so the weights sum to 1.
  double total = 0.0;
  for (const auto& c : rep.components) total += c.weight;
  for (auto& c : rep.components) c.weight /= total;
  return rep;
}

Eigen::MatrixXd RepresentationConditionalCovariance(
    const GaussianModel& model, const ConstructedRepresentation& rep) {
  rep.Validate(model.dim());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(model.dim(), model.dim());
  for (const auto& c : rep.components) {
    if (c.weight == 0.0) continue;
    v += c.weight * ConditionalMeanCovariance(model.sigma, c.linear_map);
  }
  return v;
}

PlanePoint ClosedFormPlanePoint(const GaussianModel& model,
                                const ConstructedRepresentation& rep) {
  const Eigen::MatrixXd v = RepresentationConditionalCovariance(model, rep);
  return {std::max(0.0, model.y.dot(v * model.y)),
          std::max(0.0, model.a.dot(v * model.a)), TaskKind::kRegression};
}

namespace {

struct RunningMoments {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  std::vector<double> values;

  void Add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
    values.push_back(x);
  }
  double Variance() const { return n > 0.0 ? std::max(0.0, m2 / n) : 0.0; }
  // Standard error of the population variance estimate.
  double VarianceStderr() const {
    if (n < 2.0) return 0.0;
    const double var = Variance();
    double acc = 0.0;
    for (double x : values) {
      const double dev = (x - mean) * (x - mean) - var;
      acc += dev * dev;
    }
    return std::sqrt(acc / n / n);
  }
};

}  // namespace

MonteCarloEstimate MonteCarloPlanePoint(const GaussianModel& model,
                                        const ConstructedRepresentation& rep,
                                        std::int64_t n, std::uint64_t seed) {
  model.Validate();
  rep.Validate(model.dim());
  if (n < 1000) throw InputError("Monte-Carlo verification needs n >= 1000");
  const Eigen::Index d = model.dim();
  const MatrixRoot root = PsdRoot(model.sigma);

  // Per component, E[Y | L phi] - E[Y] = g_y . (phi - mean).
  std::vector<Eigen::VectorXd> g_y, g_a;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& c : rep.components) {
    const Eigen::MatrixXd& l = c.linear_map;
    const Eigen::MatrixXd gain =
        l.transpose() * PseudoInverseSymmetric(l * model.sigma * l.transpose()) * l *
        model.sigma;
    g_y.push_back(gain * model.y);
    g_a.push_back(gain * model.a);
    acc += c.weight;
    cumulative.push_back(acc);
  }
  const double base_y = model.y.dot(model.mean);
  const double base_a = model.a.dot(model.mean);

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RunningMoments my, ma;
  Eigen::VectorXd xi(d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) xi(k) = normal(rng);
    const Eigen::VectorXd centered = root.half * xi;
    std::size_t comp = 0;
    if (rep.components.size() > 1) {
      const double u = OpenUniform(rng) * acc;
      while (comp + 1 < cumulative.size() && u > cumulative[comp]) ++comp;
    }
    my.Add(base_y + g_y[comp].dot(centered));
    ma.Add(base_a + g_a[comp].dot(centered));
  }
  MonteCarloEstimate out;
  out.point = {my.Variance(), ma.Variance(), TaskKind::kRegression};
  out.stderr_utility = my.VarianceStderr();
  out.stderr_leakage = ma.VarianceStderr();
  return out;
}

AchievabilityReport MonteCarloVerify(const GaussianModel& model,
                                     const ConstructedRepresentation& rep,
                                     const PlanePoint& bound_target,
                                     std::int64_t n, std::uint64_t seed) {
  AchievabilityReport report;
  report.n = n;
  report.seed = seed;
  report.bound_target = bound_target;
  report.closed_form = ClosedFormPlanePoint(model, rep);
  const RegressionPlane plane = model.Plane();
  const double scale = std::max({1.0, plane.var_y, plane.var_a});
  report.attained =
      std::abs(report.closed_form.utility - bound_target.utility) <= kAttainTolerance * scale &&
      std::abs(report.closed_form.leakage - bound_target.leakage) <= kAttainTolerance * scale;
  const MonteCarloEstimate mc = MonteCarloPlanePoint(model, rep, n, seed);
  report.monte_carlo = mc.point;
  report.mc_stderr_utility = mc.stderr_utility;
  report.mc_stderr_leakage = mc.stderr_leakage;
  // Absolute floor for components whose conditional mean is constant up to
  // rounding.
  const double floor = 1e-12 * scale;
  report.mc_within_3se =
      std::abs(mc.point.utility - report.closed_form.utility) <=
          3.0 * mc.stderr_utility + floor &&
      std::abs(mc.point.leakage - report.closed_form.leakage) <=
          3.0 * mc.stderr_leakage + floor;
  return report;
}

}  // namespace infoplane
