#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "infoplane/dataset.h"
#include "infoplane/metrics.h"

namespace infoplane {

enum class LearnerKind { kLogit, kOls, kLinear };
std::string_view ToString(LearnerKind kind);
LearnerKind ParseLearnerKind(std::string_view text);

struct LearnerConfig {
  LearnerKind kind = LearnerKind::kLogit;
  int d_out = 2;  // linear only
  double learning_rate = 0.1;
  int epochs = 500;
  std::uint64_t seed = 0;
  double ridge = 1e-8;  // ols only

  void Validate() const;
};

struct BaselineResult {
  RepresentationSample representation;  // on the evaluation split
  double train_loss = 0.0;
  double train_accuracy = 0.0;  // classification only
  std::vector<std::string> warnings;
};

// Fits on `train` and encodes `eval`. Features are one-hot encoded with the
// training levels and standardized with training moments (logit, linear).
BaselineResult TrainBaseline(const TabularDataset& train, const TabularDataset& eval,
                             TaskKind task, const LearnerConfig& config);

}  // namespace infoplane
