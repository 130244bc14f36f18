#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stance/features.hpp"
#include "stance/label.hpp"

namespace stance {

enum class Loss { Hinge, SquaredHinge };

std::string_view to_string(Loss loss);
Loss parse_loss(std::string_view text);

struct TrainConfig {
  double C = 1.0;
  double tol = 1e-4;
  int max_iter = 1000;  // epochs over the data
  std::uint64_t seed = 1;
  Loss loss = Loss::Hinge;

  // Throws ArgumentError unless C > 0, tol > 0 and max_iter >= 1.
  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

// Solution of one binary problem. The bias is the weight of a constant
// feature appended to every example, so it is regularized with w.
struct BinaryModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> alpha;  // dual coefficients, one per example
  double dual_objective = 0.0;
  double primal_objective = 0.0;
  int epochs = 0;
  bool converged = false;

  double decision(const SparseBooleanVector& x) const;
};

// L2-regularized hinge (or squared hinge) SVM solved by dual coordinate
// descent with a seeded random visiting order each epoch. Stops once the
// largest projected-gradient magnitude in an epoch falls below tol.
//
// Labels are -1 / +1. Throws DataError "degenerate training set" when only
// one sign is present and ArgumentError on dimension mismatch.
//
// KKT slack: the stopping test reads gradients during the final epoch, while
// later updates in that epoch still move w. After convergence, examples with
// alpha = 0 satisfy y f(x) >= 1 - kappa * tol and examples at the upper
// bound satisfy y f(x) <= 1 + kappa * tol, with kappa = 10.
BinaryModel train_binary(std::span<const SparseBooleanVector> vectors, std::span<const int> labels,
                         const TrainConfig& config);

// Dual objective 0.5 a'Qa - sum(a) with Q_ij = y_i y_j (x_i.x_j + 1) + D_ii,
// where D_ii = 0 for hinge and 1/(2C) for squared hinge.
double dual_objective(std::span<const SparseBooleanVector> vectors, std::span<const int> labels,
                      std::span<const double> alpha, const TrainConfig& config);

enum class ClassifierMode { Ternary, Binary };

std::string_view to_string(ClassifierMode mode);
ClassifierMode parse_mode(std::string_view text);

// Ternary: one-vs-rest weights for [Against, Favor, None].
// Binary: a single Favor-vs-Against margin; Favor scores +s, Against -s.
class LinearModel {
 public:
  LinearModel(ClassifierMode mode, std::shared_ptr<const FeatureSpace> space, std::vector<std::vector<double>> weights,
              std::vector<double> biases, TrainConfig config, std::string topic = {});

  ClassifierMode mode() const { return mode_; }
  const std::vector<StanceLabel>& classes() const { return classes_; }
  const FeatureSpace& space() const { return *space_; }
  std::shared_ptr<const FeatureSpace> space_ptr() const { return space_; }
  const FeatureSetSelector& selector() const { return space_->selector(); }
  const TrainConfig& config() const { return config_; }
  const std::string& topic() const { return topic_; }

  // Stored vectors: three in ternary mode, one (the Favor margin) in binary.
  const std::vector<std::vector<double>>& raw_weights() const { return weights_; }
  const std::vector<double>& raw_biases() const { return biases_; }

  // Score per entry of classes().
  std::vector<double> decision_values(const SparseBooleanVector& x) const;

  // Argmax of decision_values; ties go to the earlier canonical class.
  StanceLabel predict(const SparseBooleanVector& x) const;

  // Feature string -> weight toward the class. Throws ArgumentError when the
  // class is not modelled.
  std::map<std::string, double> class_weights(StanceLabel label) const;

  // Dense weight vector toward the class (binary Against is the negation).
  std::vector<double> class_weight_vector(StanceLabel label) const;

 private:
  ClassifierMode mode_;
  std::vector<StanceLabel> classes_;
  std::shared_ptr<const FeatureSpace> space_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> biases_;
  TrainConfig config_;
  std::string topic_;
};

// Ternary trains one binary problem per class. Binary drops None examples
// and trains Favor (+1) against Against (-1). The topic only labels errors
// and the model. Throws DataError naming the class when a class is empty.
LinearModel train_ovr(std::span<const SparseBooleanVector> vectors, std::span<const StanceLabel> labels,
                      ClassifierMode mode, std::shared_ptr<const FeatureSpace> space, const TrainConfig& config,
                      std::string topic = {});

}  // namespace stance
