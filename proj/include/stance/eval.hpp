#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stance/label.hpp"

namespace stance {

// [gold][pred], canonical order on both axes.
using ConfusionMatrix = std::array<std::array<std::size_t, kNumLabels>, kNumLabels>;

ConfusionMatrix confusion(std::span<const StanceLabel> gold, std::span<const StanceLabel> pred);

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Precision, recall and F1 of one class with the 0/0 := 0 convention.
ClassScore class_score(const ConfusionMatrix& m, StanceLabel label);

struct FScores {
  double f_favor = 0.0;
  double f_against = 0.0;
  double f_avg = 0.0;  // (f_favor + f_against) / 2; None is excluded

  static FScores from(const ConfusionMatrix& m);
};

struct TopicScore {
  std::string topic;
  FScores scores;
  ConfusionMatrix confusion{};
  std::size_t count = 0;
};

struct EvalReport {
  std::vector<TopicScore> per_topic;  // first-appearance order
  FScores overall;                    // from the pooled confusion
  ConfusionMatrix confusion{};
  std::size_t count = 0;

  const TopicScore* topic(std::string_view name) const;
};

// Official SemEval rule. Throws ArgumentError on length mismatch or empty input.
EvalReport score_semeval(std::span<const StanceLabel> gold, std::span<const StanceLabel> pred,
                         std::span<const std::string> topics);

// A polar class present in the gold labels whose recall is 0; the class with
// fewer gold instances is reported when both collapse.
std::optional<StanceLabel> collapsed_class(const ConfusionMatrix& m);

// Expected F_avg of a guesser drawing labels independently from
// `pred_prior` when gold labels follow `gold_prior` (both over canonical order).
double chance_f_avg(const std::array<double, kNumLabels>& gold_prior, const std::array<double, kNumLabels>& pred_prior);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold of each index

  std::vector<std::size_t> fold(std::size_t f) const;
  std::vector<std::size_t> complement(std::size_t f) const;
};

// Seeded shuffle then round-robin. Throws ArgumentError when k < 2 or n < k.
FoldPlan kfold(std::size_t n, std::size_t k, std::uint64_t seed);

struct TTestResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Two-tailed paired Student t. Throws ArgumentError "degenerate difference
// vector" when all differences are zero or identical (zero variance).
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of the first sample
  double p_value = 1.0;
  bool exact = false;  // true when computed by full enumeration
};

// Two-sided. Enumerates all rank assignments when both samples have at most
// eight values; otherwise uses the normal approximation with tie and
// continuity corrections.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Scoring tables. Percentages with two decimals, layout of the per-topic
// result tables (model rows, topic columns, then the overall triple).
std::string format_confusion_csv(const ConfusionMatrix& m);
std::string format_report_csv(const EvalReport& report);
std::string format_report_table(const EvalReport& report, std::string_view model_name);

}  // namespace stance
