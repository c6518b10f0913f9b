#include "infoplane/baselines.h"

#include <cmath>

#include "infoplane/error.h"
#include "infoplane/random.h"

namespace infoplane {

std::string_view ToString(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kLogit: return "logit";
    case LearnerKind::kOls: return "ols";
    case LearnerKind::kLinear: return "linear";
  }
  return "unknown";
}

LearnerKind ParseLearnerKind(std::string_view text) {
  if (text == "logit") return LearnerKind::kLogit;
  if (text == "ols") return LearnerKind::kOls;
  if (text == "linear") return LearnerKind::kLinear;
  throw InputError("unknown learner '" + std::string(text) + "'");
}

void LearnerConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InputError("learning rate must be positive");
  }
  if (epochs < 1) throw InputError("epochs must be at least 1");
  if (kind == LearnerKind::kLinear && d_out < 1) throw InputError("d_out must be at least 1");
  if (!(ridge >= 0.0)) throw InputError("ridge must be non-negative");
}

namespace {

struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer Fit(const Eigen::MatrixXd& x) {
    Standardizer s;
    const double n = static_cast<double>(x.rows());
    s.mean = x.colwise().mean();
    s.scale = ((x.rowwise() - s.mean).array().square().colwise().sum() / n).sqrt();
    for (Eigen::Index j = 0; j < s.scale.size(); ++j) {
      if (!(s.scale(j) > 0.0)) s.scale(j) = 1.0;
    }
    return s;
  }
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const {
    return ((x.rowwise() - mean).array().rowwise() / scale.array()).matrix();
  }
};

double Sigmoid(double s) {
  return s >= 0.0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
}

// Mean binary cross-entropy in nats, computed from logits.
double CrossEntropy(const Eigen::VectorXd& logits, const Eigen::VectorXd& y) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double s = logits(i);
    // log(1 + exp(s)) - y s
    acc += std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))) - y(i) * s;
  }
  return acc / static_cast<double>(y.size());
}

void RequireBinary(const Eigen::VectorXd& y) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) {
      throw InputError("classification targets must be 0 or 1");
    }
  }
}

void CheckLoss(double loss, int epoch) {
  if (!std::isfinite(loss)) {
    throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch));
  }
}

double Accuracy(const Eigen::VectorXd& scores, const Eigen::VectorXd& y,
                double threshold) {
  double hits = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    hits += ((scores(i) > threshold) == (y(i) == 1.0)) ? 1.0 : 0.0;
  }
  return hits / static_cast<double>(y.size());
}

}  // namespace

BaselineResult TrainBaseline(const TabularDataset& train, const TabularDataset& eval,
                             TaskKind task, const LearnerConfig& config) {
  config.Validate();
  if (train.rows() < 1 || eval.rows() < 1) throw InputError("empty train or eval split");
  const FeatureEncoder encoder = FeatureEncoder::Fit(train);
  if (encoder.width() < 1) throw InputError("no feature columns");
  BaselineResult result;
  const Eigen::MatrixXd x_train = encoder.Transform(train);
  const Eigen::MatrixXd x_eval = encoder.Transform(eval, &result.warnings);
  const Eigen::VectorXd y = train.Values(train.target);
  if (task == TaskKind::kClassification) RequireBinary(y);
  const double n = static_cast<double>(y.size());
  const Eigen::Index p = x_train.cols();

  Eigen::MatrixXd z_eval;
  switch (config.kind) {
    case LearnerKind::kLogit: {
      if (task != TaskKind::kClassification) {
        throw InputError("logit baseline requires a classification task");
      }
      const Standardizer st = Standardizer::Fit(x_train);
      const Eigen::MatrixXd xs = st.Apply(x_train);
      Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
      double b = 0.0;
      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const Eigen::VectorXd s = (xs * w).array() + b;
        CheckLoss(CrossEntropy(s, y), epoch);
        Eigen::VectorXd r(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) r(i) = Sigmoid(s(i)) - y(i);
        w -= config.learning_rate * xs.transpose() * r / n;
        b -= config.learning_rate * r.sum() / n;
      }
      const Eigen::VectorXd s = (xs * w).array() + b;
      result.train_loss = CrossEntropy(s, y);
      CheckLoss(result.train_loss, config.epochs);
      result.train_accuracy = Accuracy(s, y, 0.0);
      z_eval = (st.Apply(x_eval) * w).array() + b;
      break;
    }
    case LearnerKind::kOls: {
      Eigen::MatrixXd xa(x_train.rows(), p + 1);
      xa << x_train, Eigen::VectorXd::Ones(x_train.rows());
      if (config.ridge == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xa);
        if (qr.rank() < p + 1) throw NumericalError("singular normal equations");
      }
      Eigen::MatrixXd gram = xa.transpose() * xa;
      gram.diagonal().array() += config.ridge;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
      if (ldlt.info() != Eigen::Success) throw NumericalError("normal equations failed");
      const Eigen::VectorXd beta = ldlt.solve(xa.transpose() * y);
      if (!beta.allFinite()) throw NumericalError("singular normal equations");
      const Eigen::VectorXd fit = xa * beta;
      result.train_loss = (fit - y).squaredNorm() / n;
      if (task == TaskKind::kClassification) result.train_accuracy = Accuracy(fit, y, 0.5);
      Eigen::MatrixXd ea(x_eval.rows(), p + 1);
      ea << x_eval, Eigen::VectorXd::Ones(x_eval.rows());
      z_eval = ea * beta;
      break;
    }
    case LearnerKind::kLinear: {
      const Standardizer st = Standardizer::Fit(x_train);
      const Eigen::MatrixXd xs = st.Apply(x_train);
      const int d = config.d_out;
      Rng rng(config.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::MatrixXd w(d, p);
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        w.data()[i] = normal(rng) / std::sqrt(static_cast<double>(p));
      }
      Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
      Eigen::VectorXd v(d);
      for (int i = 0; i < d; ++i) v(i) = normal(rng) / std::sqrt(static_cast<double>(d));
      double c = task == TaskKind::kRegression ? y.mean() : 0.0;
      const bool ce = task == TaskKind::kClassification;
      const auto loss_of = [&](const Eigen::VectorXd& s) {
        return ce ? CrossEntropy(s, y) : (s - y).squaredNorm() / n;
      };
      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const Eigen::MatrixXd z = (xs * w.transpose()).rowwise() + b.transpose();
        const Eigen::VectorXd s = (z * v).array() + c;
        CheckLoss(loss_of(s), epoch);
        Eigen::VectorXd ds(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
          ds(i) = (ce ? Sigmoid(s(i)) - y(i) : 2.0 * (s(i) - y(i))) / n;
        }
        const Eigen::VectorXd dv = z.transpose() * ds;
        const double dc = ds.sum();
        const Eigen::MatrixXd dz = ds * v.transpose();
        const Eigen::MatrixXd dw = dz.transpose() * xs;
        const Eigen::VectorXd db = dz.colwise().sum().transpose();
        w -= config.learning_rate * dw;
        b -= config.learning_rate * db;
        v -= config.learning_rate * dv;
        c -= config.learning_rate * dc;
      }
      const Eigen::MatrixXd z = (xs * w.transpose()).rowwise() + b.transpose();
      const Eigen::VectorXd s = (z * v).array() + c;
      result.train_loss = loss_of(s);
      CheckLoss(result.train_loss, config.epochs);
      if (ce) result.train_accuracy = Accuracy(s, y, 0.0);
      z_eval = (st.Apply(x_eval) * w.transpose()).rowwise() + b.transpose();
      break;
    }
  }
  if (!z_eval.allFinite()) throw NumericalError("non-finite representation values");

  result.representation.kind = task;
  result.representation.z = z_eval;
  result.representation.y = eval.Values(eval.target);
  result.representation.a = eval.attribute.empty()
                                ? Eigen::VectorXd::Zero(z_eval.rows())
                                : eval.Values(eval.attribute);
  return result;
}

}  // namespace infoplane
