#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/linsvm.hpp"

namespace stance {

// |a ∩ b| / |a ∪ b| over sorted unique ranges; 0 when both are empty.
template <std::ranges::forward_range A, std::ranges::forward_range B>
double jaccard(const A& a, const B& b) {
  std::size_t common = 0;
  auto ia = std::ranges::begin(a);
  auto ib = std::ranges::begin(b);
  const auto ea = std::ranges::end(a);
  const auto eb = std::ranges::end(b);
  while (ia != ea && ib != eb) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const auto size_a = static_cast<std::size_t>(std::ranges::distance(a));
  const auto size_b = static_cast<std::size_t>(std::ranges::distance(b));
  const std::size_t uni = size_a + size_b - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

struct HistogramBin {
  double low = 0.0;   // percent
  double high = 0.0;  // percent, exclusive except for the last bin
  std::size_t count = 0;
};

struct OverlapDistribution {
  std::string pair_name;  // "IN_AT vs PN_AT"
  std::vector<std::string> users;
  std::vector<double> values;  // per-user Jaccard in [0, 1]
  std::size_t excluded = 0;    // users with both sets empty
  std::vector<HistogramBin> histogram;

  double mean() const;
};

// Histogram over [0, 100] percent in bins of `bin_width` points.
std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width = 5.0);

OverlapDistribution network_overlap(const ProfileMap& profiles, ProfileField first, ProfileField second,
                                    double bin_width = 5.0);
// Field names as accepted by parse_profile_field; throws ArgumentError.
OverlapDistribution network_overlap(const ProfileMap& profiles, std::string_view first, std::string_view second,
                                    double bin_width = 5.0);

struct RankedFeatures {
  StanceLabel label = StanceLabel::Favor;
  std::string topic;
  std::string source;  // model name used to label curve pairs
  std::vector<std::pair<std::string, double>> entries;  // weight desc, then feature asc
};

// Top `n` features by weight toward `label`. Throws ArgumentError when the
// model has no such class or n == 0.
RankedFeatures top_features(const LinearModel& model, StanceLabel label, std::string topic, std::size_t n);

struct CurvePoint {
  std::size_t n = 0;
  std::string pair;  // "<source a> vs <source b>", ... or "mean"
  double jaccard = 0.0;
};

// Jaccard of the top-N feature sets for N = 1..n_max, with family prefixes
// removed. With a third ranking, all three pairs plus their mean are emitted.
// Throws ArgumentError on an empty ranking or n_max == 0.
std::vector<CurvePoint> topn_overlap_curve(const RankedFeatures& a, const RankedFeatures& b,
                                           const RankedFeatures* c, std::size_t n_max);

enum class ConsistencyBucket { Uniform, PolarizedPlusNone, Mixed };

std::string_view to_string(ConsistencyBucket bucket);

struct AuthorConsistency {
  std::string author_id;
  std::string topic;
  std::size_t instances = 0;
  ConsistencyBucket bucket = ConsistencyBucket::Uniform;
};

struct ConsistencyReport {
  std::vector<AuthorConsistency> authors;  // authors with >= 2 instances on a topic
  std::size_t uniform = 0;
  std::size_t polarized_plus_none = 0;
  std::size_t mixed = 0;

  double uniform_fraction() const;
};

// Buckets each (author, topic) group with at least two predictions.
ConsistencyReport user_consistency(const Dataset& dataset, std::span<const StanceLabel> predictions);

std::string format_histogram_csv(const OverlapDistribution& dist);
std::string format_curve_csv(std::span<const CurvePoint> curve);
std::string format_ranking_csv(const RankedFeatures& ranked);
std::string format_consistency_csv(const ConsistencyReport& report);

}  // namespace stance
