#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "../support/oracles.hpp"
#include "stance/error.hpp"
#include "stance/linsvm.hpp"

using namespace stance;

namespace {

SparseBooleanVector vec(std::vector<std::uint32_t> idx, std::size_t dim) { return {std::move(idx), dim}; }

struct Tiny {
  std::vector<SparseBooleanVector> vectors;
  std::vector<int> labels;
  oracle::DualProblem problem;
};

// Random boolean problem with both labels present.
Tiny random_tiny(std::mt19937& gen, double C, bool squared) {
  Tiny t;
  const std::size_t n = 2 + gen() % 5;
  const std::size_t dim = 1 + gen() % 4;
  do {
    t.vectors.clear();
    t.labels.clear();
    t.problem.x.clear();
    for (std::size_t i = 0; i < n; ++i) {
      SparseBooleanVector v{{}, dim};
      std::vector<double> dense(dim, 0.0);
      for (std::uint32_t d = 0; d < dim; ++d) {
        if (gen() % 2) {
          v.indices.push_back(d);
          dense[d] = 1.0;
        }
      }
      t.vectors.push_back(v);
      t.problem.x.push_back(dense);
      t.labels.push_back(gen() % 2 ? 1 : -1);
    }
  } while (std::count(t.labels.begin(), t.labels.end(), 1) == 0 || std::count(t.labels.begin(), t.labels.end(), -1) == 0);
  t.problem.y = t.labels;
  t.problem.C = C;
  t.problem.squared_hinge = squared;
  return t;
}

TrainConfig tight(double C, Loss loss = Loss::Hinge) {
  TrainConfig cfg;
  cfg.C = C;
  cfg.tol = 1e-10;
  cfg.max_iter = 200000;
  cfg.loss = loss;
  return cfg;
}

std::shared_ptr<const FeatureSpace> space_of(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return std::make_shared<const FeatureSpace>(names, FeatureSetSelector{FeatureFamily::Txt});
}

}  // namespace

TEST_CASE("oracle self-check on a hand-solved problem") {
  // One positive at x=0 (only the bias), one negative at x=e0.
  // Q = [[1,-1],[-1,2]]; unconstrained optimum a = Q^-1 1 = (3, 2).
  oracle::DualProblem p{{{0.0}, {1.0}}, {1, -1}, 10.0, false};
  const auto sol = oracle::solve_dual(p);
  CHECK(sol.alpha[0] == doctest::Approx(3.0));
  CHECK(sol.alpha[1] == doctest::Approx(2.0));
  CHECK(sol.objective == doctest::Approx(-2.5));
  p.C = 1.0;  // both clip at C: 0.5(1 - 2 + 2) - 2
  CHECK(oracle::solve_dual(p).objective == doctest::Approx(-1.5));
}

TEST_CASE("separable pair") {
  const std::vector<SparseBooleanVector> xs = {vec({0}, 2), vec({1}, 2)};
  const std::vector<int> ys = {1, -1};
  const auto m = train_binary(xs, ys, TrainConfig{});
  CHECK(m.decision(xs[0]) > 0);
  CHECK(m.decision(xs[1]) < 0);
  CHECK(m.converged);
}

TEST_CASE("dual objective matches the enumeration oracle") {
  std::mt19937 gen(2024);
  for (double C : {0.1, 1.0, 10.0}) {
    for (bool squared : {false, true}) {
      for (int trial = 0; trial < 40; ++trial) {
        const auto t = random_tiny(gen, C, squared);
        const auto cfg = tight(C, squared ? Loss::SquaredHinge : Loss::Hinge);
        const auto m = train_binary(t.vectors, t.labels, cfg);
        const auto ref = oracle::solve_dual(t.problem);
        CHECK(std::abs(m.dual_objective - ref.objective) <= 1e-6);
        CHECK(dual_objective(t.vectors, t.labels, m.alpha, cfg) == doctest::Approx(m.dual_objective));
        // strong duality at the optimum
        CHECK(std::abs(m.primal_objective + m.dual_objective) <= 1e-6);
      }
    }
  }
}

TEST_CASE("duplicated data with C halved gives the same boundary") {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_tiny(gen, 1.0, false);
    auto xs = t.vectors;
    auto ys = t.labels;
    xs.insert(xs.end(), t.vectors.begin(), t.vectors.end());
    ys.insert(ys.end(), t.labels.begin(), t.labels.end());
    const auto once = train_binary(t.vectors, t.labels, tight(1.0));
    const auto twice = train_binary(xs, ys, tight(0.5));
    // The hinge optimum in w is unique (strictly convex primal), so the
    // boundaries agree even when the dual solutions differ.
    for (std::size_t d = 0; d < once.weights.size(); ++d) CHECK(std::abs(once.weights[d] - twice.weights[d]) <= 1e-6);
    CHECK(std::abs(once.bias - twice.bias) <= 1e-6);
    const auto ref_once = oracle::solve_dual(t.problem);
    CHECK(std::abs(twice.dual_objective - ref_once.objective) <= 1e-6);
  }
}

TEST_CASE("dual feasibility and KKT at the default tolerance") {
  std::mt19937 gen(5);
  const double kappa = 10.0;  // KKT slack documented with train_binary
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 10 + gen() % 30;
    const std::size_t dim = 3 + gen() % 10;
    std::vector<SparseBooleanVector> xs;
    std::vector<int> ys;
    for (std::size_t i = 0; i < n; ++i) {
      SparseBooleanVector v{{}, dim};
      for (std::uint32_t d = 0; d < dim; ++d) {
        if (gen() % 3 == 0) v.indices.push_back(d);
      }
      xs.push_back(v);
      ys.push_back(i % 2 ? 1 : -1);
    }
    TrainConfig cfg;
    cfg.C = trial % 2 ? 0.5 : 5.0;
    cfg.max_iter = 100000;
    const auto m = train_binary(xs, ys, cfg);
    REQUIRE(m.converged);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(m.alpha[i] >= 0.0);
      CHECK(m.alpha[i] <= cfg.C);
      if (m.alpha[i] == 0.0) CHECK(ys[i] * m.decision(xs[i]) >= 1.0 - cfg.tol * kappa);
      if (m.alpha[i] == cfg.C) CHECK(ys[i] * m.decision(xs[i]) <= 1.0 + cfg.tol * kappa);
    }
    for (double w : m.weights) CHECK(std::isfinite(w));
  }
}

TEST_CASE("training is deterministic per seed") {
  std::mt19937 gen(3);
  const auto t = random_tiny(gen, 1.0, false);
  TrainConfig cfg;
  cfg.seed = 77;
  const auto a = train_binary(t.vectors, t.labels, cfg);
  const auto b = train_binary(t.vectors, t.labels, cfg);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  CHECK(a.alpha == b.alpha);
}

TEST_CASE("train_binary errors") {
  const std::vector<SparseBooleanVector> xs = {vec({0}, 2), vec({1}, 2)};
  CHECK_THROWS_AS(train_binary(xs, std::vector<int>{1, 1}, TrainConfig{}), DataError);
  const std::vector<SparseBooleanVector> mixed = {vec({0}, 2), vec({1}, 3)};
  CHECK_THROWS_AS(train_binary(mixed, std::vector<int>{1, -1}, TrainConfig{}), ArgumentError);
  TrainConfig bad;
  bad.C = 0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = TrainConfig{};
  bad.tol = -1;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = TrainConfig{};
  bad.max_iter = 0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  CHECK(parse_loss("squared_hinge") == Loss::SquaredHinge);
  CHECK_THROWS_AS(parse_loss("log"), ArgumentError);
}

TEST_CASE("one-vs-rest shapes") {
  const auto space = space_of(3);
  const std::vector<SparseBooleanVector> xs = {vec({0}, 3), vec({1}, 3), vec({2}, 3)};
  const std::vector<StanceLabel> ys = {StanceLabel::Against, StanceLabel::Favor, StanceLabel::None};
  const auto ternary = train_ovr(xs, ys, ClassifierMode::Ternary, space, TrainConfig{});
  CHECK(ternary.classes() == std::vector<StanceLabel>{StanceLabel::Against, StanceLabel::Favor, StanceLabel::None});
  CHECK(ternary.raw_weights().size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(ternary.predict(xs[i]) == ys[i]);

  const auto binary = train_ovr(xs, ys, ClassifierMode::Binary, space, TrainConfig{});
  CHECK(binary.mode() == ClassifierMode::Binary);
  CHECK(binary.classes() == std::vector<StanceLabel>{StanceLabel::Against, StanceLabel::Favor});
  CHECK(binary.raw_weights().size() == 1);
  // The None example was dropped, so its feature never moved.
  CHECK(binary.raw_weights()[0][2] == 0.0);

  const std::vector<StanceLabel> favor_only = {StanceLabel::Favor, StanceLabel::Favor, StanceLabel::None};
  CHECK_THROWS_AS(train_ovr(xs, favor_only, ClassifierMode::Binary, space, TrainConfig{}, "Atheism"), DataError);
  try {
    train_ovr(xs, favor_only, ClassifierMode::Binary, space, TrainConfig{}, "Atheism");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("Against") != std::string::npos);
    CHECK(std::string(e.what()).find("Atheism") != std::string::npos);
  }
}

TEST_CASE("decision values, ties and signs") {
  const auto space = space_of(2);
  const LinearModel zero(ClassifierMode::Ternary, space, {{0, 0}, {0, 0}, {0, 0}}, {0, 0, 0}, TrainConfig{});
  CHECK(zero.decision_values(vec({}, 2)) == std::vector<double>{0, 0, 0});
  CHECK(zero.predict(vec({0, 1}, 2)) == StanceLabel::Against);

  const LinearModel dotm(ClassifierMode::Ternary, space, {{2, 0}, {0, 0}, {0, 0}}, {0, 0, 0}, TrainConfig{});
  CHECK(dotm.decision_values(vec({0}, 2))[0] == 2.0);
  CHECK_THROWS_AS(dotm.decision_values(vec({0}, 3)), ArgumentError);

  const LinearModel scores(ClassifierMode::Ternary, space, {{0, 0}, {0, 0}, {0, 0}}, {0.2, 0.9, 0.1}, TrainConfig{});
  CHECK(scores.predict(vec({}, 2)) == StanceLabel::Favor);
  const LinearModel tie_fn(ClassifierMode::Ternary, space, {{0, 0}, {0, 0}, {0, 0}}, {0.1, 0.5, 0.5}, TrainConfig{});
  CHECK(tie_fn.predict(vec({}, 2)) == StanceLabel::Favor);

  const LinearModel bin(ClassifierMode::Binary, space, {{0, 0}}, {-1.5}, TrainConfig{});
  const auto dv = bin.decision_values(vec({}, 2));
  CHECK(dv == std::vector<double>{1.5, -1.5});
  CHECK(bin.predict(vec({}, 2)) == StanceLabel::Against);
}

TEST_CASE("class weights") {
  const auto space = space_of(2);
  const LinearModel t(ClassifierMode::Ternary, space, {{0, 0}, {0.5, -0.9}, {0, 0}}, {0, 0, 0}, TrainConfig{});
  CHECK(t.class_weights(StanceLabel::Favor) == std::map<std::string, double>{{"a", 0.5}, {"b", -0.9}});

  const LinearModel b(ClassifierMode::Binary, space, {{0.25, -2.0}}, {0.0}, TrainConfig{});
  const auto fav = b.class_weights(StanceLabel::Favor);
  const auto ag = b.class_weights(StanceLabel::Against);
  for (const auto& [k, v] : fav) CHECK(ag.at(k) == -v);
  CHECK_THROWS_AS(b.class_weights(StanceLabel::None), ArgumentError);
}

TEST_CASE("prediction properties over random models") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-3, 3);
  const auto space = space_of(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<double>> w(3, std::vector<double>(5));
    std::vector<double> bias(3);
    for (auto& row : w) {
      for (auto& v : row) v = u(gen);
    }
    for (auto& v : bias) v = u(gen);
    SparseBooleanVector x{{}, 5};
    for (std::uint32_t d = 0; d < 5; ++d) {
      if (gen() % 2) x.indices.push_back(d);
    }
    const LinearModel m(ClassifierMode::Ternary, space, w, bias, TrainConfig{});
    const double scale = 0.01 + std::abs(u(gen)) * 10;
    auto scaled_w = w;
    auto scaled_b = bias;
    for (auto& row : scaled_w) {
      for (auto& v : row) v *= scale;
    }
    for (auto& v : scaled_b) v *= scale;
    const LinearModel scaled(ClassifierMode::Ternary, space, scaled_w, scaled_b, TrainConfig{});
    CHECK(m.predict(x) == scaled.predict(x));

    const LinearModel bin(ClassifierMode::Binary, space, {w[0]}, {bias[0]}, TrainConfig{});
    CHECK(bin.predict(x) != StanceLabel::None);
  }
}
