#include "stance/linsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stance/error.hpp"
#include "stance/rng.hpp"
#include "text_util.hpp"

namespace stance {

namespace {

double dot(const std::vector<double>& w, const SparseBooleanVector& x) {
  double s = 0.0;
  for (auto idx : x.indices) s += w[idx];
  return s;
}

void check_vectors(std::span<const SparseBooleanVector> vectors, std::size_t dimension) {
  for (const auto& v : vectors) {
    if (v.dimension != dimension) {
      throw ArgumentError("dimension mismatch: expected " + std::to_string(dimension) + ", got " +
                          std::to_string(v.dimension));
    }
    for (auto idx : v.indices) {
      if (idx >= dimension) throw ArgumentError("feature index out of range");
    }
  }
}

std::size_t shared_dimension(std::span<const SparseBooleanVector> vectors) {
  if (vectors.empty()) throw DataError("degenerate training set: no examples");
  const std::size_t dim = vectors.front().dimension;
  check_vectors(vectors, dim);
  return dim;
}

}  // namespace

std::string_view to_string(Loss loss) { return loss == Loss::Hinge ? "hinge" : "squared_hinge"; }

Loss parse_loss(std::string_view text) {
  const auto key = detail::ascii_lower(detail::trim(text));
  if (key == "hinge" || key == "l1") return Loss::Hinge;
  if (key == "squared_hinge" || key == "l2") return Loss::SquaredHinge;
  throw ArgumentError("unknown loss '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw ArgumentError("C must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ArgumentError("tol must be positive");
  if (max_iter < 1) throw ArgumentError("max_iter must be >= 1");
}

double BinaryModel::decision(const SparseBooleanVector& x) const {
  if (x.dimension != weights.size()) throw ArgumentError("dimension mismatch");
  return dot(weights, x) + bias;
}

double dual_objective(std::span<const SparseBooleanVector> vectors, std::span<const int> labels,
                      std::span<const double> alpha, const TrainConfig& config) {
  const std::size_t n = vectors.size();
  if (labels.size() != n || alpha.size() != n) throw ArgumentError("length mismatch");
  const double diag = config.loss == Loss::Hinge ? 0.0 : 0.5 / config.C;
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::uint32_t> common;
      std::set_intersection(vectors[i].indices.begin(), vectors[i].indices.end(), vectors[j].indices.begin(),
                            vectors[j].indices.end(), std::back_inserter(common));
      double q = labels[i] * labels[j] * (static_cast<double>(common.size()) + 1.0);
      if (i == j) q += diag;
      quad += alpha[i] * alpha[j] * q;
    }
  }
  return 0.5 * quad - lin;
}

BinaryModel train_binary(std::span<const SparseBooleanVector> vectors, std::span<const int> labels,
                         const TrainConfig& config) {
  config.validate();
  if (labels.size() != vectors.size()) throw ArgumentError("vectors and labels differ in length");
  const std::size_t dim = shared_dimension(vectors);
  bool has_pos = false;
  bool has_neg = false;
  for (int y : labels) {
    if (y == 1) {
      has_pos = true;
    } else if (y == -1) {
      has_neg = true;
    } else {
      throw ArgumentError("binary labels must be -1 or +1");
    }
  }
  if (!has_pos || !has_neg) throw DataError("degenerate training set");

  const std::size_t n = vectors.size();
  const bool hinge = config.loss == Loss::Hinge;
  const double upper = hinge ? config.C : std::numeric_limits<double>::infinity();
  const double diag = hinge ? 0.0 : 0.5 / config.C;

  BinaryModel model;
  model.weights.assign(dim, 0.0);
  model.alpha.assign(n, 0.0);
  std::vector<double>& w = model.weights;
  std::vector<double>& alpha = model.alpha;
  double& wb = model.bias;

  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) qii[i] = static_cast<double>(vectors[i].indices.size()) + 1.0 + diag;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);

  for (int epoch = 0; epoch < config.max_iter; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double max_violation = 0.0;
    for (std::size_t i : order) {
      const double y = labels[i];
      const double grad = y * (dot(w, vectors[i]) + wb) - 1.0 + diag * alpha[i];
      double pg = grad;
      if (alpha[i] == 0.0) {
        pg = std::min(grad, 0.0);
      } else if (alpha[i] == upper) {
        pg = std::max(grad, 0.0);
      }
      max_violation = std::max(max_violation, std::abs(pg));
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - grad / qii[i], 0.0, upper);
      const double step = (alpha[i] - old) * y;
      if (step == 0.0) continue;
      for (auto idx : vectors[i].indices) w[idx] += step;
      wb += step;
    }
    model.epochs = epoch + 1;
    if (max_violation < config.tol) {
      model.converged = true;
      break;
    }
  }

  double norm2 = wb * wb;
  for (double v : w) norm2 += v * v;
  double alpha_sum = 0.0;
  double alpha_sq = 0.0;
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    alpha_sum += alpha[i];
    alpha_sq += alpha[i] * alpha[i];
    const double slack = std::max(0.0, 1.0 - labels[i] * (dot(w, vectors[i]) + wb));
    loss_sum += hinge ? slack : slack * slack;
  }
  model.dual_objective = 0.5 * norm2 + 0.5 * diag * alpha_sq - alpha_sum;
  model.primal_objective = 0.5 * norm2 + config.C * loss_sum;
  return model;
}

std::string_view to_string(ClassifierMode mode) { return mode == ClassifierMode::Ternary ? "ternary" : "binary"; }

ClassifierMode parse_mode(std::string_view text) {
  const auto key = detail::ascii_lower(detail::trim(text));
  if (key == "ternary" || key == "three" || key == "3") return ClassifierMode::Ternary;
  if (key == "binary" || key == "two" || key == "2") return ClassifierMode::Binary;
  throw ArgumentError("unknown mode '" + std::string(text) + "'");
}

LinearModel::LinearModel(ClassifierMode mode, std::shared_ptr<const FeatureSpace> space,
                         std::vector<std::vector<double>> weights, std::vector<double> biases, TrainConfig config,
                         std::string topic)
    : mode_(mode),
      space_(std::move(space)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      config_(config),
      topic_(std::move(topic)) {
  if (!space_) throw ArgumentError("model needs a feature space");
  const std::size_t expected = mode_ == ClassifierMode::Ternary ? 3 : 1;
  if (weights_.size() != expected || biases_.size() != expected) {
    throw ArgumentError("wrong number of weight vectors for mode " + std::string(to_string(mode_)));
  }
  for (const auto& w : weights_) {
    if (w.size() != space_->size()) throw ArgumentError("weight vector length differs from feature space size");
    for (double v : w) {
      if (!std::isfinite(v)) throw ArgumentError("non-finite weight");
    }
  }
  for (double b : biases_) {
    if (!std::isfinite(b)) throw ArgumentError("non-finite bias");
  }
  if (mode_ == ClassifierMode::Ternary) {
    classes_ = {StanceLabel::Against, StanceLabel::Favor, StanceLabel::None};
  } else {
    classes_ = {StanceLabel::Against, StanceLabel::Favor};
  }
}

std::vector<double> LinearModel::decision_values(const SparseBooleanVector& x) const {
  check_vectors(std::span<const SparseBooleanVector>(&x, 1), space_->size());
  if (mode_ == ClassifierMode::Binary) {
    const double s = dot(weights_[0], x) + biases_[0];
    return {-s, s};
  }
  std::vector<double> scores(3);
  for (std::size_t c = 0; c < 3; ++c) scores[c] = dot(weights_[c], x) + biases_[c];
  return scores;
}

StanceLabel LinearModel::predict(const SparseBooleanVector& x) const {
  const auto scores = decision_values(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return classes_[best];
}

std::vector<double> LinearModel::class_weight_vector(StanceLabel label) const {
  if (mode_ == ClassifierMode::Ternary) return weights_[index_of(label)];
  if (label == StanceLabel::Favor) return weights_[0];
  if (label == StanceLabel::Against) {
    std::vector<double> neg(weights_[0].size());
    std::transform(weights_[0].begin(), weights_[0].end(), neg.begin(), [](double v) { return -v; });
    return neg;
  }
  throw ArgumentError("class " + std::string(to_string(label)) + " is not part of a binary model");
}

std::map<std::string, double> LinearModel::class_weights(StanceLabel label) const {
  const auto w = class_weight_vector(label);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < w.size(); ++i) out.emplace(space_->feature(i), w[i]);
  return out;
}

LinearModel train_ovr(std::span<const SparseBooleanVector> vectors, std::span<const StanceLabel> labels,
                      ClassifierMode mode, std::shared_ptr<const FeatureSpace> space, const TrainConfig& config,
                      std::string topic) {
  config.validate();
  if (!space) throw ArgumentError("train_ovr needs a feature space");
  if (vectors.size() != labels.size()) throw ArgumentError("vectors and labels differ in length");
  check_vectors(vectors, space->size());
  const std::string where = topic.empty() ? std::string() : " for topic '" + topic + "'";

  std::vector<std::vector<double>> weights;
  std::vector<double> biases;

  if (mode == ClassifierMode::Binary) {
    std::vector<SparseBooleanVector> kept;
    std::vector<int> y;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == StanceLabel::None) continue;
      kept.push_back(vectors[i]);
      y.push_back(labels[i] == StanceLabel::Favor ? 1 : -1);
    }
    for (auto cls : {StanceLabel::Against, StanceLabel::Favor}) {
      const int sign = cls == StanceLabel::Favor ? 1 : -1;
      if (std::find(y.begin(), y.end(), sign) == y.end()) {
        throw DataError("class " + std::string(to_string(cls)) + " has no training examples" + where);
      }
    }
    auto m = train_binary(kept, y, config);
    weights.push_back(std::move(m.weights));
    biases.push_back(m.bias);
  } else {
    for (auto cls : kCanonicalLabels) {
      if (std::find(labels.begin(), labels.end(), cls) == labels.end()) {
        throw DataError("class " + std::string(to_string(cls)) + " has no training examples" + where);
      }
    }
    for (auto cls : kCanonicalLabels) {
      std::vector<int> y(labels.size());
      std::transform(labels.begin(), labels.end(), y.begin(), [cls](StanceLabel l) { return l == cls ? 1 : -1; });
      auto m = train_binary(vectors, y, config);
      weights.push_back(std::move(m.weights));
      biases.push_back(m.bias);
    }
  }
  return LinearModel(mode, std::move(space), std::move(weights), std::move(biases), config, std::move(topic));
}

}  // namespace stance
