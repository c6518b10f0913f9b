#include "infoplane/regression_plane.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "infoplane/error.h"

namespace infoplane {

RegressionPlane RegressionPlane::FromSamples(std::span<const double> y,
                                             std::span<const double> a) {
  if (y.size() != a.size() || y.empty()) {
    throw InputError("y and a must be non-empty and of equal length");
  }
  const double n = static_cast<double>(y.size());
  double my = 0.0, ma = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    my += y[i];
    ma += a[i];
  }
  my /= n;
  ma /= n;
  RegressionPlane plane;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dy = y[i] - my, da = a[i] - ma;
    plane.var_y += dy * dy;
    plane.var_a += da * da;
    plane.cov_ya += dy * da;
  }
  plane.var_y /= n;
  plane.var_a /= n;
  plane.cov_ya /= n;
  return plane;
}

double RegressionPlane::RhoSquared() const {
  if (var_y <= 0.0 || var_a <= 0.0) return 0.0;
  return std::clamp(cov_ya * cov_ya / (var_y * var_a), 0.0, 1.0);
}

void RegressionPlane::Validate() const {
  if (!std::isfinite(var_y) || !std::isfinite(var_a) || !std::isfinite(cov_ya)) {
    throw InputError("regression plane statistics must be finite");
  }
  if (var_y < 0.0 || var_a < 0.0) throw InputError("variances must be non-negative");
  if ((var_y == 0.0 || var_a == 0.0) && cov_ya != 0.0) {
    throw InputError("nonzero covariance with a zero variance");
  }
  if (cov_ya * cov_ya > var_y * var_a * (1.0 + 1e-9) + 1e-300) {
    throw InputError("covariance violates Cauchy-Schwarz");
  }
}

double VertexEyLs(const RegressionPlane& plane) {
  plane.Validate();
  return plane.var_y * (1.0 - plane.RhoSquared());
}

double VertexEaLs(const RegressionPlane& plane) {
  plane.Validate();
  return plane.var_a * plane.RhoSquared();
}

FrontierValue Frontier(const RegressionPlane& plane, double alpha) {
  plane.Validate();
  constexpr double kClamp = 1e-12;
  if (!(alpha >= -kClamp)) throw InputError("alpha must be non-negative");
  const double rho2 = plane.RhoSquared();
  if (alpha > rho2 + kClamp) return {plane.var_y, true};
  alpha = std::clamp(alpha, 0.0, rho2);
  const double rho = std::sqrt(rho2);
  const double value =
      plane.var_y * (2.0 * rho * std::sqrt((1.0 - rho2) * alpha * (1.0 - alpha)) +
                     1.0 - alpha - rho2 + 2.0 * alpha * rho2);
  return {value, false};
}

REigenvalues EigenvaluesR(double var_y, double var_a, double cov, double lambda) {
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  const double sum = lambda * var_a - var_y;
  // Product of the two roots; <= 0 by Cauchy-Schwarz.
  const double product = std::min(0.0, lambda * (cov * cov - var_a * var_y));
  const double root = std::sqrt(sum * sum - 4.0 * product);
  REigenvalues out;
  // Pick the root without cancellation, recover the other from the product.
  if (sum >= 0.0) {
    out.sigma_1 = 0.5 * (sum + root);
    out.sigma_d = out.sigma_1 > 0.0 ? product / out.sigma_1 : 0.0;
  } else {
    out.sigma_d = 0.5 * (sum - root);
    out.sigma_1 = out.sigma_d < 0.0 ? product / out.sigma_d : 0.0;
  }
  return out;
}

double LagrangianBound(const RegressionPlane& plane, double lambda) {
  plane.Validate();
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  return std::min(0.0,
                  EigenvaluesR(plane.var_y, plane.var_a, plane.cov_ya, lambda).sigma_d);
}

namespace {

// Maximizer of a concave function on [lo, hi] by golden-section search.
double GoldenMax(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

double DualClosedForm(const RegressionPlane& plane, double c) {
  const double a = plane.var_y, b = plane.var_a;
  if (b <= 0.0) return a;
  const double rho2 = plane.RhoSquared();
  const double c_prime = b - 2.0 * c;
  const double t = 1.0 - 2.0 * rho2;
  double sup_psi = -a;
  if (c_prime >= t * b) {
    const double under = std::max(0.0, (1.0 - t * t) * (b * b - c_prime * c_prime));
    sup_psi = -(a / b) * (std::sqrt(under) + c_prime * t);
  }
  return 0.5 * a - 0.5 * sup_psi;
}

}  // namespace

DualFrontier FrontierFromDual(const RegressionPlane& plane, double c, int grid) {
  plane.Validate();
  if (!(c >= 0.0)) throw InputError("c must be non-negative");
  if (grid < 2) throw InputError("grid needs at least two points");
  DualFrontier out;
  out.closed_form = DualClosedForm(plane, c);
  const double a = plane.var_y, b = plane.var_a;
  if (a <= 0.0 || b <= 0.0) {
    out.numeric = a;
    return out;
  }
  const auto objective = [&](double lambda) {
    return LagrangianBound(plane, lambda) - lambda * c;
  };

  std::vector<double> lambdas = {0.0};
  const double scale = a / b;
  double lo = 1e-6, hi = 1e6;
  const auto fill = [&](double from, double to) {
    const double step = std::log(to / from) / (grid - 1);
    for (int i = 0; i < grid; ++i) lambdas.push_back(scale * from * std::exp(step * i));
  };
  fill(lo, hi);
  std::size_t best = 0;
  for (int extension = 0;; ++extension) {
    best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double v = objective(lambdas[i]);
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    if (best + 1 < lambdas.size() || extension >= 4) break;
    lo = hi;
    hi *= 1e6;
    fill(lo, hi);
  }
  const double left = best == 0 ? 0.0 : lambdas[best - 1];
  const double right = best + 1 < lambdas.size() ? lambdas[best + 1] : lambdas[best];
  double lambda_star = lambdas[best];
  if (right > left) {
    const double refined = GoldenMax(objective, left, right);
    if (objective(refined) >= objective(lambda_star)) lambda_star = refined;
  }
  out.best_lambda = lambda_star;
  out.numeric = -objective(lambda_star);
  return out;
}

PlanePoint LagrangianOptimalPoint(const RegressionPlane& plane, double lambda) {
  plane.Validate();
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  PlanePoint p{0.0, 0.0, TaskKind::kRegression};
  const double a = plane.var_y, b = plane.var_a;
  Eigen::Vector2d a2 = Eigen::Vector2d::Zero();
  Eigen::Vector2d y2 = Eigen::Vector2d::Zero();
  if (b > 0.0) {
    a2(0) = std::sqrt(b);
    y2(0) = plane.cov_ya / std::sqrt(b);
    y2(1) = std::sqrt(std::max(0.0, a - plane.cov_ya * plane.cov_ya / b));
  } else {
    y2(1) = std::sqrt(a);
  }
  const Eigen::Matrix2d r = lambda * a2 * a2.transpose() - y2 * y2.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(r);
  if (solver.eigenvalues()(0) >= 0.0) return p;  // constant map is optimal
  const Eigen::Vector2d u = solver.eigenvectors().col(0);
  p.utility = std::pow(y2.dot(u), 2);
  p.leakage = std::pow(a2.dot(u), 2);
  return p;
}

CostBoundsLs RegressionCostBounds(const RegressionPlane& plane) {
  plane.Validate();
  const double rho2 = plane.RhoSquared();
  return {plane.var_y * rho2, plane.var_a * (1.0 - rho2)};
}

PointClassificationLs ClassifyPointLs(const RegressionPlane& plane,
                                      const PlanePoint& point) {
  plane.Validate();
  if (point.kind != TaskKind::kRegression) {
    throw InputError("regression plane needs a regression point");
  }
  constexpr double kTol = 1e-9;
  const double rho2 = plane.RhoSquared();
  PointClassificationLs out;
  out.alpha_of_point = plane.var_a > 0.0 ? point.leakage / plane.var_a : 0.0;
  out.frontier_utility =
      Frontier(plane, std::clamp(out.alpha_of_point, 0.0, rho2)).value;

  if (point.utility > plane.var_y + kTol || point.leakage > plane.var_a + kTol ||
      point.utility < -kTol || point.leakage < -kTol ||
      point.utility > out.frontier_utility + kTol) {
    out.status = PointStatus::kOutsideKnownBounds;
  } else if (point.utility < out.frontier_utility - 1e-12) {
    out.status = PointStatus::kInteriorSuboptimal;
  } else {
    out.status = PointStatus::kFrontierOrBeyond;
  }
  if (out.status != PointStatus::kInteriorSuboptimal) return out;

  const auto dist_sq = [&](double alpha) {
    const double du = Frontier(plane, alpha).value - point.utility;
    const double dl = alpha * plane.var_a - point.leakage;
    return du * du + dl * dl;
  };
  constexpr int kGrid = 10000;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double v = dist_sq(rho2 * i / (kGrid - 1));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (rho2 > 0.0) {
    const double lo = rho2 * std::max(0, best - 1) / (kGrid - 1);
    const double hi = rho2 * std::min(kGrid - 1, best + 1) / (kGrid - 1);
    const double refined =
        GoldenMax([&](double alpha) { return -dist_sq(alpha); }, lo, hi);
    best_value = std::min(best_value, dist_sq(refined));
  }
  out.frontier_distance = std::sqrt(best_value);
  return out;
}

RegressionCertificate CertifyRegression(const RegressionPlane& plane,
                                        const PlanePoint& point, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon must be finite and non-negative");
  }
  if (plane.var_y <= 0.0) throw NumericalError("Var(Y) is zero; nothing to certify");
  RegressionCertificate cert;
  cert.epsilon = epsilon;
  cert.classification = ClassifyPointLs(plane, point);
  cert.statistic = (cert.classification.frontier_utility - point.utility) / plane.var_y;
  cert.suboptimal = cert.statistic > epsilon;
  return cert;
}

std::vector<PlanePoint> FrontierPolyline(const RegressionPlane& plane, int samples) {
  plane.Validate();
  if (samples < 2) throw InputError("at least two frontier samples are required");
  const double rho2 = plane.RhoSquared();
  std::vector<PlanePoint> out;
  if (rho2 <= 0.0) {
    out.push_back({plane.var_y, 0.0, TaskKind::kRegression});
    return out;
  }
  for (int i = 0; i < samples; ++i) {
    const double alpha = rho2 * i / (samples - 1);
    out.push_back({Frontier(plane, alpha).value, alpha * plane.var_a,
                   TaskKind::kRegression});
  }
  return out;
}

std::vector<PlanePoint> RegionOutline(const RegressionPlane& plane, int samples) {
  std::vector<PlanePoint> out = {{0.0, 0.0, TaskKind::kRegression}};
  for (const auto& p : FrontierPolyline(plane, samples)) out.push_back(p);
  out.push_back({plane.var_y, plane.var_a, TaskKind::kRegression});
  RegressionPlane swapped = plane;
  std::swap(swapped.var_y, swapped.var_a);
  std::vector<PlanePoint> mirrored = FrontierPolyline(swapped, samples);
  std::reverse(mirrored.begin(), mirrored.end());
  for (const auto& p : mirrored) out.push_back({p.leakage, p.utility, TaskKind::kRegression});
  return out;
}

}  // namespace infoplane
