#include "stance/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "stance/error.hpp"
#include "text_util.hpp"

namespace stance {

namespace {

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Top-N sets grown one rank at a time with a running intersection count.
class GrowingPair {
 public:
  GrowingPair(const std::vector<std::string>& a, const std::vector<std::string>& b) : a_(a), b_(b) {}

  double advance_to(std::size_t n) {
    while (pos_ < n) {
      if (pos_ < a_.size()) add(a_[pos_], set_a_, set_b_);
      if (pos_ < b_.size()) add(b_[pos_], set_b_, set_a_);
      ++pos_;
    }
    const std::size_t uni = set_a_.size() + set_b_.size() - common_;
    return uni == 0 ? 0.0 : static_cast<double>(common_) / static_cast<double>(uni);
  }

 private:
  void add(const std::string& item, std::set<std::string>& mine, const std::set<std::string>& other) {
    if (mine.insert(item).second && other.contains(item)) ++common_;
  }

  const std::vector<std::string>& a_;
  const std::vector<std::string>& b_;
  std::set<std::string> set_a_;
  std::set<std::string> set_b_;
  std::size_t common_ = 0;
  std::size_t pos_ = 0;
};

std::vector<std::string> stripped_names(const RankedFeatures& r) {
  std::vector<std::string> out;
  out.reserve(r.entries.size());
  for (const auto& [feature, weight] : r.entries) out.emplace_back(strip_namespace(feature));
  return out;
}

}  // namespace

double OverlapDistribution::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0) || bin_width > 100.0) throw ArgumentError("bin width must be in (0, 100]");
  const auto bins = static_cast<std::size_t>(std::ceil(100.0 / bin_width - 1e-9));
  std::vector<HistogramBin> out(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i].low = static_cast<double>(i) * bin_width;
    out[i].high = std::min(100.0, static_cast<double>(i + 1) * bin_width);
  }
  for (double v : values) {
    const double percent = 100.0 * std::clamp(v, 0.0, 1.0);
    auto idx = static_cast<std::size_t>(std::floor(percent / bin_width + 1e-9));
    if (idx >= bins) idx = bins - 1;
    ++out[idx].count;
  }
  return out;
}

OverlapDistribution network_overlap(const ProfileMap& profiles, ProfileField first, ProfileField second,
                                    double bin_width) {
  if (profiles.empty()) throw ArgumentError("network overlap needs at least one profile");
  OverlapDistribution dist;
  dist.pair_name = std::string(to_string(first)) + " vs " + std::string(to_string(second));
  for (const auto& [user, profile] : profiles) {
    const auto& a = field_of(profile, first);
    const auto& b = field_of(profile, second);
    if (a.empty() && b.empty()) {
      ++dist.excluded;
      continue;
    }
    dist.users.push_back(user);
    dist.values.push_back(jaccard(a, b));
  }
  dist.histogram = histogram(dist.values, bin_width);
  return dist;
}

OverlapDistribution network_overlap(const ProfileMap& profiles, std::string_view first, std::string_view second,
                                    double bin_width) {
  return network_overlap(profiles, parse_profile_field(first), parse_profile_field(second), bin_width);
}

RankedFeatures top_features(const LinearModel& model, StanceLabel label, std::string topic, std::size_t n) {
  if (n == 0) throw ArgumentError("N must be at least 1");
  const auto weights = model.class_weight_vector(label);
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Columns are in lexicographic feature order, so index order breaks ties.
  const std::size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t x, std::size_t y) { return weights[x] > weights[y] || (weights[x] == weights[y] && x < y); });
  RankedFeatures out;
  out.label = label;
  out.topic = std::move(topic);
  out.source = model.selector().to_string();
  for (std::size_t i = 0; i < take; ++i) out.entries.emplace_back(model.space().feature(order[i]), weights[order[i]]);
  return out;
}

std::vector<CurvePoint> topn_overlap_curve(const RankedFeatures& a, const RankedFeatures& b, const RankedFeatures* c,
                                           std::size_t n_max) {
  if (n_max == 0) throw ArgumentError("n_max must be at least 1");
  if (a.entries.empty() || b.entries.empty() || (c && c->entries.empty())) {
    throw ArgumentError("empty feature ranking");
  }
  const auto name = [](const RankedFeatures& r, std::string_view fallback) {
    return r.source.empty() ? std::string(fallback) : r.source;
  };
  const auto na = stripped_names(a);
  const auto nb = stripped_names(b);
  const auto nc = c ? stripped_names(*c) : std::vector<std::string>{};

  std::vector<std::pair<std::string, GrowingPair>> pairs;
  pairs.emplace_back(name(a, "a") + " vs " + name(b, "b"), GrowingPair(na, nb));
  if (c) {
    pairs.emplace_back(name(a, "a") + " vs " + name(*c, "c"), GrowingPair(na, nc));
    pairs.emplace_back(name(b, "b") + " vs " + name(*c, "c"), GrowingPair(nb, nc));
  }

  std::vector<CurvePoint> curve;
  for (std::size_t n = 1; n <= n_max; ++n) {
    double sum = 0.0;
    for (auto& [label, pair] : pairs) {
      const double j = pair.advance_to(n);
      sum += j;
      curve.push_back({n, label, j});
    }
    if (c) curve.push_back({n, "mean", sum / 3.0});
  }
  return curve;
}

std::string_view to_string(ConsistencyBucket bucket) {
  switch (bucket) {
    case ConsistencyBucket::Uniform: return "uniform";
    case ConsistencyBucket::PolarizedPlusNone: return "polarized_plus_none";
    case ConsistencyBucket::Mixed: return "mixed";
  }
  return "?";
}

double ConsistencyReport::uniform_fraction() const {
  return authors.empty() ? 1.0 : static_cast<double>(uniform) / static_cast<double>(authors.size());
}

ConsistencyReport user_consistency(const Dataset& dataset, std::span<const StanceLabel> predictions) {
  if (predictions.size() != dataset.instances.size()) {
    throw ArgumentError("predictions are not aligned with the dataset");
  }
  std::map<std::pair<std::string, std::string>, std::array<std::size_t, kNumLabels>> groups;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& inst = dataset.instances[i];
    ++groups[{inst.topic, inst.author_id}][index_of(predictions[i])];
  }
  ConsistencyReport report;
  for (const auto& [key, counts] : groups) {
    const std::size_t total = counts[0] + counts[1] + counts[2];
    if (total < 2) continue;
    const bool against = counts[index_of(StanceLabel::Against)] > 0;
    const bool favor = counts[index_of(StanceLabel::Favor)] > 0;
    const bool none = counts[index_of(StanceLabel::None)] > 0;
    AuthorConsistency entry{key.second, key.first, total, ConsistencyBucket::Uniform};
    if (against && favor) {
      entry.bucket = ConsistencyBucket::Mixed;
      ++report.mixed;
    } else if (none && (against || favor)) {
      entry.bucket = ConsistencyBucket::PolarizedPlusNone;
      ++report.polarized_plus_none;
    } else {
      ++report.uniform;
    }
    report.authors.push_back(std::move(entry));
  }
  return report;
}

std::string format_histogram_csv(const OverlapDistribution& dist) {
  std::string out = "bin_low,bin_high,count\n";
  for (const auto& bin : dist.histogram) {
    out += detail::format_double(bin.low) + "," + detail::format_double(bin.high) + "," + std::to_string(bin.count) +
           "\n";
  }
  return out;
}

std::string format_curve_csv(std::span<const CurvePoint> curve) {
  std::string out = "N,pair,jaccard\n";
  for (const auto& p : curve) out += std::to_string(p.n) + "," + csv_field(p.pair) + "," + fixed(p.jaccard, 6) + "\n";
  return out;
}

std::string format_ranking_csv(const RankedFeatures& ranked) {
  std::string out = "rank,feature,weight,class,topic\n";
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    const auto& [feature, weight] = ranked.entries[i];
    out += std::to_string(i + 1) + "," + csv_field(feature) + "," + fixed(weight, 6) + "," +
           std::string(to_string(ranked.label)) + "," + csv_field(ranked.topic) + "\n";
  }
  return out;
}

std::string format_consistency_csv(const ConsistencyReport& report) {
  std::string out = "author_id,topic,instances,bucket\n";
  for (const auto& a : report.authors) {
    out += csv_field(a.author_id) + "," + csv_field(a.topic) + "," + std::to_string(a.instances) + "," +
           std::string(to_string(a.bucket)) + "\n";
  }
  return out;
}

}  // namespace stance
