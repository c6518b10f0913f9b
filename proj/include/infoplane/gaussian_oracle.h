#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "infoplane/metrics.h"
#include "infoplane/regression_plane.h"

namespace infoplane {

// phi ~ N(mean, sigma), Y = <y, phi>, A = <a, phi>.
struct GaussianModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd a;
  Eigen::VectorXd y;

  Eigen::Index dim() const { return sigma.rows(); }
  // Symmetric within 1e-10, eigenvalues >= -1e-10, a and y nonzero.
  void Validate() const;
  RegressionPlane Plane() const;
};

struct Whitening {
  Eigen::VectorXd a_prime;  // sigma^(1/2) a
  Eigen::VectorXd y_prime;  // sigma^(1/2) y
  Eigen::MatrixXd sigma_half;
  Eigen::MatrixXd sigma_half_inv;  // pseudo-inverse on the range
};
Whitening Whiten(const GaussianModel& model);

struct MapComponent {
  Eigen::MatrixXd linear_map;  // all zeros: the constant representation
  double weight = 1.0;
};

// Z = (L_S phi, S) with S drawn from the component weights.
struct ConstructedRepresentation {
  std::vector<MapComponent> components;
  // Filled by RealizePsdTarget: s = sum m_i / sigma_i and the weights
  // m_i / (s sigma_i) over the eigen-directions.
  double scale = 0.0;
  std::vector<double> proof_weights;

  bool randomized() const { return components.size() > 1; }
  void Validate(Eigen::Index dim) const;
};

ConstructedRepresentation ConstantRepresentation(Eigen::Index dim);
ConstructedRepresentation IdentityRepresentation(Eigen::Index dim);

// VarE[A|Z] = 0 and VarE[Y|Z] = Var(Y)(1 - rho^2).
ConstructedRepresentation ConstructInvariantOptimal(const GaussianModel& model);
// VarE[Y|Z] = Var(Y) and VarE[A|Z] = Var(A) rho^2.
ConstructedRepresentation ConstructSufficiencyOptimal(const GaussianModel& model);
// Minimizes lambda VarE[A|Z] - VarE[Y|Z] with the smallest eigenvector of
// lambda a'a'^T - y'y'^T.
ConstructedRepresentation ConstructLagrangianOptimal(const GaussianModel& model,
                                                     double lambda);

// L with VarE[phi | L phi] = sigma_j u_j u_j^T, eigenpairs ordered as in
// SortedSpectrum.
Eigen::MatrixXd Rank1LinearMap(const GaussianModel& model, Eigen::Index j);

// Representation whose VarE[phi | Z] equals `target`. The target must
// satisfy 0 <= M <= Sigma and be diagonal in an eigenbasis of Sigma.
ConstructedRepresentation RealizePsdTarget(const GaussianModel& model,
                                           const Eigen::MatrixXd& target);

// Sum_k w_k Sigma L_k^T (L_k Sigma L_k^T)^+ L_k Sigma.
Eigen::MatrixXd RepresentationConditionalCovariance(
    const GaussianModel& model, const ConstructedRepresentation& rep);

PlanePoint ClosedFormPlanePoint(const GaussianModel& model,
                                const ConstructedRepresentation& rep);

struct MonteCarloEstimate {
  PlanePoint point;
  double stderr_utility = 0.0;
  double stderr_leakage = 0.0;
};
// Samples phi and S, evaluates the exact per-component conditional means and
// returns their sample variances.
MonteCarloEstimate MonteCarloPlanePoint(const GaussianModel& model,
                                        const ConstructedRepresentation& rep,
                                        std::int64_t n, std::uint64_t seed);

struct AchievabilityReport {
  PlanePoint closed_form;
  PlanePoint monte_carlo;
  double mc_stderr_utility = 0.0;
  double mc_stderr_leakage = 0.0;
  PlanePoint bound_target;
  bool attained = false;        // closed form within tolerance of the target
  bool mc_within_3se = false;   // both Monte-Carlo coordinates
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

// Closed-form match tolerance, scaled by max(1, Var(Y), Var(A)).
inline constexpr double kAttainTolerance = 1e-8;

AchievabilityReport MonteCarloVerify(const GaussianModel& model,
                                     const ConstructedRepresentation& rep,
                                     const PlanePoint& bound_target,
                                     std::int64_t n, std::uint64_t seed);

}  // namespace infoplane
