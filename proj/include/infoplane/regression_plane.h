#pragma once

#include <string>
#include <vector>

#include "infoplane/classification_plane.h"
#include "infoplane/metrics.h"

namespace infoplane {

// Second moments of (Y, A). With `noisy` set the fields hold VarE[Y|X],
// VarE[A|X] and Cov(E[Y|X], E[A|X]); every formula below is unchanged.
struct RegressionPlane {
  double var_y = 0.0;
  double var_a = 0.0;
  double cov_ya = 0.0;
  bool noisy = false;

  // Population (1/N) moments of paired samples.
  static RegressionPlane FromSamples(std::span<const double> y,
                                     std::span<const double> a);

  // Squared correlation, 0 when either variance vanishes.
  double RhoSquared() const;
  void Validate() const;
};

double VertexEyLs(const RegressionPlane& plane);
double VertexEaLs(const RegressionPlane& plane);

struct FrontierValue {
  double value = 0.0;
  bool no_tradeoff = false;  // alpha beyond rho^2: full utility is free
};

// Largest VarE[Y|Z] subject to VarE[A|Z] <= alpha * Var(A).
FrontierValue Frontier(const RegressionPlane& plane, double alpha);

// min over Z of lambda * VarE[A|Z] - VarE[Y|Z]; never positive.
double LagrangianBound(const RegressionPlane& plane, double lambda);

struct REigenvalues {
  double sigma_1 = 0.0;
  double sigma_d = 0.0;
};
// Nonzero spectrum of lambda a'a'^T - y'y'^T from the scalar moments.
REigenvalues EigenvaluesR(double var_y, double var_a, double cov, double lambda);

struct DualFrontier {
  double numeric = 0.0;      // -max_lambda {OPT(lambda) - lambda c}, searched
  double closed_form = 0.0;  // case split of the dual supremum
  double best_lambda = 0.0;
};
// `grid` geometric lambda points on (var_y / var_a) * [1e-6, 1e6] plus 0,
// refined by golden-section search around the best grid point.
DualFrontier FrontierFromDual(const RegressionPlane& plane, double c,
                              int grid = 2048);

// Point reached by the Lagrangian-optimal projection of the two-dimensional
// realization Sigma = I, a = (sqrt(var_a), 0), y = (cov / sqrt(var_a), ...).
PlanePoint LagrangianOptimalPoint(const RegressionPlane& plane, double lambda);

struct CostBoundsLs {
  double mse_floor_under_invariance = 0.0;
  double attribute_mse_ceiling_under_sufficiency = 0.0;
};
CostBoundsLs RegressionCostBounds(const RegressionPlane& plane);

struct PointClassificationLs {
  PointStatus status = PointStatus::kFrontierOrBeyond;
  double frontier_distance = 0.0;
  double alpha_of_point = 0.0;
  double frontier_utility = 0.0;  // frontier value at min(alpha, rho^2)
};
PointClassificationLs ClassifyPointLs(const RegressionPlane& plane,
                                      const PlanePoint& point);

// Regression certificate: the point is certified suboptimal when its utility
// falls short of the frontier at its own leakage by more than epsilon * Var(Y).
struct RegressionCertificate {
  double statistic = 0.0;  // (frontier - utility) / Var(Y)
  double epsilon = 0.0;
  bool suboptimal = false;
  PointClassificationLs classification;
};
RegressionCertificate CertifyRegression(const RegressionPlane& plane,
                                        const PlanePoint& point, double epsilon);

// `samples` points of the frontier for alpha evenly spaced on [0, rho^2].
std::vector<PlanePoint> FrontierPolyline(const RegressionPlane& plane, int samples);

// Counter-clockwise outline of the feasible region: the frontier, the
// full-information corner, and the mirrored boundary with Y and A exchanged.
std::vector<PlanePoint> RegionOutline(const RegressionPlane& plane, int samples);

}  // namespace infoplane
