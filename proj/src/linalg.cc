#include "infoplane/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace infoplane {
namespace {

void NormalizeSign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(arg)) + 1e-12) arg = i;
  }
  if (v(arg) < 0.0) v = -v;
}

}  // namespace

SymmetricSpectrum SortedSpectrum(const Eigen::MatrixXd& symmetric) {
  const Eigen::MatrixXd sym = 0.5 * (symmetric + symmetric.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();
  const Eigen::Index n = values.size();
  for (Eigen::Index i = 0; i < n; ++i) NormalizeSign(vectors.col(i));

  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    if (std::abs(values(l) - values(r)) > 1e-12 * scale) {
      return values(l) > values(r);
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(vectors(k, l) - vectors(k, r)) > 1e-12) {
        return vectors(k, l) > vectors(k, r);
      }
    }
    return l < r;
  });

  SymmetricSpectrum out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = values(order[i]);
    out.vectors.col(i) = vectors.col(order[i]);
  }
  return out;
}

Eigen::MatrixXd PseudoInverseSymmetric(const Eigen::MatrixXd& symmetric) {
  const Eigen::Index n = symmetric.rows();
  if (n == 0) return symmetric;
  const Eigen::MatrixXd sym = 0.5 * (symmetric + symmetric.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double max_sv = values.cwiseAbs().maxCoeff();
  if (max_sv == 0.0) return Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd inv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inv(i) = std::abs(values(i)) > max_sv * kPinvRelativeCutoff
                 ? 1.0 / values(i)
                 : 0.0;
  }
  const Eigen::MatrixXd& u = solver.eigenvectors();
  return u * inv.asDiagonal() * u.transpose();
}

MatrixRoot PsdRoot(const Eigen::MatrixXd& psd) {
  MatrixRoot root;
  root.spectrum = SortedSpectrum(psd);
  const Eigen::Index n = psd.rows();
  const double max_sv =
      n == 0 ? 0.0 : std::max(0.0, root.spectrum.values.maxCoeff());
  Eigen::VectorXd half(n), half_inv(n), in_range(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = root.spectrum.values(i);
    if (v < 0.0) v = 0.0;
    root.spectrum.values(i) = v;
    const bool kept = max_sv > 0.0 && v > max_sv * kPinvRelativeCutoff;
    half(i) = std::sqrt(v);
    half_inv(i) = kept ? 1.0 / std::sqrt(v) : 0.0;
    in_range(i) = kept ? 1.0 : 0.0;
  }
  const Eigen::MatrixXd& u = root.spectrum.vectors;
  root.half = u * half.asDiagonal() * u.transpose();
  root.half_pinv = u * half_inv.asDiagonal() * u.transpose();
  root.range_projector = u * in_range.asDiagonal() * u.transpose();
  return root;
}

Eigen::MatrixXd ConditionalMeanCovariance(const Eigen::MatrixXd& sigma,
                                          const Eigen::MatrixXd& linear_map) {
  const Eigen::MatrixXd cross = sigma * linear_map.transpose();
  const Eigen::MatrixXd z_cov = linear_map * cross;
  const Eigen::MatrixXd v = cross * PseudoInverseSymmetric(z_cov) *
                            cross.transpose();
  return 0.5 * (v + v.transpose());
}

}  // namespace infoplane
