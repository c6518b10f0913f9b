#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "infoplane/classification_plane.h"
#include "infoplane/gaussian_oracle.h"
#include "infoplane/random.h"
#include "infoplane/regression_plane.h"

namespace infoplane::testing {

inline double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double BinaryEntropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Variances log-uniform on [0.1, 10], correlation uniform on (-0.99, 0.99).
inline RegressionPlane RandomRegressionPlane(Rng& rng) {
  RegressionPlane plane;
  plane.var_y = std::pow(10.0, Uniform(rng, -1.0, 1.0));
  plane.var_a = std::pow(10.0, Uniform(rng, -1.0, 1.0));
  plane.cov_ya = Uniform(rng, -0.99, 0.99) * std::sqrt(plane.var_y * plane.var_a);
  return plane;
}

// Base rates kept away from 0 and 1 so every conditional is defined.
inline ClassificationPlane RandomClassificationPlane(Rng& rng) {
  return ClassificationPlane::FromProbabilities(
      Uniform(rng, 0.05, 0.95), Uniform(rng, 0.02, 0.98), Uniform(rng, 0.02, 0.98));
}

inline GaussianModel RandomGaussianModel(Rng& rng, Eigen::Index d) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd b(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) b(i, j) = normal(rng);
  GaussianModel model;
  model.sigma = b * b.transpose() / static_cast<double>(d) +
                0.2 * Eigen::MatrixXd::Identity(d, d);
  model.mean = Eigen::VectorXd::Zero(d);
  model.a.resize(d);
  model.y.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    model.mean(i) = normal(rng);
    model.a(i) = normal(rng);
    model.y(i) = normal(rng);
  }
  return model;
}

}  // namespace infoplane::testing
