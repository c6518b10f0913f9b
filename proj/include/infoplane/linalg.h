#pragma once

#include <Eigen/Dense>

namespace infoplane {

// Eigenpairs of a symmetric matrix, eigenvalues descending. Ties are ordered
// lexicographically by the sign-normalized eigenvector (largest-magnitude
// component positive), so the result is deterministic.
struct SymmetricSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

SymmetricSpectrum SortedSpectrum(const Eigen::MatrixXd& symmetric);

// Singular values below max_sv * kPinvRelativeCutoff are treated as zero.
inline constexpr double kPinvRelativeCutoff = 1e-12;

// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
Eigen::MatrixXd PseudoInverseSymmetric(const Eigen::MatrixXd& symmetric);

// PSD square root and its pseudo-inverse restricted to the range.
struct MatrixRoot {
  Eigen::MatrixXd half;
  Eigen::MatrixXd half_pinv;
  Eigen::MatrixXd range_projector;
  SymmetricSpectrum spectrum;  // eigenvalues clamped at zero
};
MatrixRoot PsdRoot(const Eigen::MatrixXd& psd);

// Var E[phi | L phi] for Gaussian phi with covariance sigma:
// sigma L' (L sigma L')^+ L sigma.
Eigen::MatrixXd ConditionalMeanCovariance(const Eigen::MatrixXd& sigma,
                                          const Eigen::MatrixXd& linear_map);

}  // namespace infoplane
