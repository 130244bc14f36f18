#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stance/analysis.hpp"
#include "stance/corpus.hpp"
#include "stance/eval.hpp"
#include "stance/features.hpp"
#include "stance/linsvm.hpp"

namespace stance {

// Feature space and model for one topic's training instances.
LinearModel fit_model(const Dataset& train, const FeatureSetSelector& selector, ClassifierMode mode,
                      const TrainConfig& config, std::size_t min_df = 1, std::string topic = {});

// Predictions for every instance of `data`, in order.
std::vector<StanceLabel> predict_all(const LinearModel& model, const Dataset& data);

// Per-fold F_avg of k-fold cross-validation over `train` (folds by instance).
std::vector<double> cross_validate(const Dataset& train, const FeatureSetSelector& selector, ClassifierMode mode,
                                   const TrainConfig& config, std::size_t k, std::uint64_t seed,
                                   std::size_t min_df = 1);

struct ExperimentSpec {
  std::vector<FeatureSetSelector> selectors;
  std::vector<ClassifierMode> modes;
  TrainConfig config;
  std::size_t min_df = 1;
  std::size_t jobs = 1;
  std::size_t top_features = 20;
  std::size_t curve_n_max = 1000;
  double bin_width = 5.0;
  std::size_t cv_folds = 0;  // 0 disables cross-validation

  // Throws ArgumentError when selectors or modes are empty.
  void validate() const;
};

struct CellResult {
  std::string topic;
  FeatureSetSelector selector;
  ClassifierMode mode;
  std::shared_ptr<const LinearModel> model;  // null when the cell failed
  std::vector<StanceLabel> predictions;      // aligned with the topic's test instances
  std::vector<double> cv_scores;
  std::string error;

  bool ok() const { return error.empty(); }
};

// One row of the result tables: all topics of a (selector, mode) pair.
struct RowResult {
  FeatureSetSelector selector;
  ClassifierMode mode;
  std::optional<EvalReport> report;  // pooled over successful topics
  ConsistencyReport consistency;
  bool failed = false;
};

struct ExperimentResult {
  std::vector<std::string> topics;
  std::vector<CellResult> cells;  // topic-major, then selector, then mode
  std::vector<RowResult> rows;    // mode-major, then selector
  std::size_t failures = 0;
};

// Trains and scores every (topic, selector, mode) cell, one model per topic.
// Cells run on up to spec.jobs threads; results do not depend on scheduling.
// A failing cell is recorded and the run continues.
ExperimentResult run_experiment(const Dataset& train, const Dataset& test, const ExperimentSpec& spec);

// Rows mirroring the result tables: mode, selector, F_avg per topic, the
// overall F_favor / F_against / F_avg, and collapsed minority classes.
std::string format_master_csv(const ExperimentResult& result);

// master.csv, report.txt, confusion/, analysis/ and (on failure) failures.txt.
void write_experiment(const ExperimentResult& result, const Dataset& train, const Dataset& test,
                      const ExperimentSpec& spec, const std::filesystem::path& out_dir);

std::string slug(std::string_view text);

}  // namespace stance
