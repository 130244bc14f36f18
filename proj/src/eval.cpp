#include "stance/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Average ranks (1-based) of the pooled sample, ties sharing their mean rank.
std::vector<double> pooled_ranks(const std::vector<double>& values, double* tie_term) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(n);
  double ties = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  if (tie_term) *tie_term = ties;
  return ranks;
}

}  // namespace

ConfusionMatrix confusion(std::span<const StanceLabel> gold, std::span<const StanceLabel> pred) {
  if (gold.size() != pred.size()) throw ArgumentError("gold and predicted label lists differ in length");
  ConfusionMatrix m{};
  for (std::size_t i = 0; i < gold.size(); ++i) ++m[index_of(gold[i])][index_of(pred[i])];
  return m;
}

ClassScore class_score(const ConfusionMatrix& m, StanceLabel label) {
  const std::size_t c = index_of(label);
  double predicted = 0.0;
  double actual = 0.0;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    predicted += static_cast<double>(m[k][c]);
    actual += static_cast<double>(m[c][k]);
  }
  const double tp = static_cast<double>(m[c][c]);
  ClassScore s;
  s.precision = safe_div(tp, predicted);
  s.recall = safe_div(tp, actual);
  s.f1 = safe_div(2.0 * s.precision * s.recall, s.precision + s.recall);
  return s;
}

FScores FScores::from(const ConfusionMatrix& m) {
  FScores f;
  f.f_favor = class_score(m, StanceLabel::Favor).f1;
  f.f_against = class_score(m, StanceLabel::Against).f1;
  f.f_avg = (f.f_favor + f.f_against) / 2.0;
  return f;
}

const TopicScore* EvalReport::topic(std::string_view name) const {
  for (const auto& t : per_topic) {
    if (t.topic == name) return &t;
  }
  return nullptr;
}

EvalReport score_semeval(std::span<const StanceLabel> gold, std::span<const StanceLabel> pred,
                         std::span<const std::string> topics) {
  if (gold.size() != pred.size() || gold.size() != topics.size()) {
    throw ArgumentError("gold, predicted and topic lists differ in length");
  }
  if (gold.empty()) throw ArgumentError("nothing to score");
  EvalReport report;
  report.count = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto it = std::find_if(report.per_topic.begin(), report.per_topic.end(),
                           [&](const TopicScore& t) { return t.topic == topics[i]; });
    if (it == report.per_topic.end()) {
      report.per_topic.push_back(TopicScore{topics[i], {}, {}, 0});
      it = std::prev(report.per_topic.end());
    }
    ++it->confusion[index_of(gold[i])][index_of(pred[i])];
    ++it->count;
    ++report.confusion[index_of(gold[i])][index_of(pred[i])];
  }
  for (auto& t : report.per_topic) t.scores = FScores::from(t.confusion);
  report.overall = FScores::from(report.confusion);
  return report;
}

std::optional<StanceLabel> collapsed_class(const ConfusionMatrix& m) {
  std::optional<StanceLabel> out;
  std::size_t out_support = 0;
  for (auto label : {StanceLabel::Against, StanceLabel::Favor}) {
    const auto& row = m[index_of(label)];
    const std::size_t support = std::accumulate(row.begin(), row.end(), std::size_t{0});
    if (support == 0 || row[index_of(label)] != 0) continue;
    if (!out || support < out_support) {
      out = label;
      out_support = support;
    }
  }
  return out;
}

double chance_f_avg(const std::array<double, kNumLabels>& gold_prior, const std::array<double, kNumLabels>& pred_prior) {
  double total = 0.0;
  for (auto label : {StanceLabel::Favor, StanceLabel::Against}) {
    const double p = gold_prior[index_of(label)];
    const double r = pred_prior[index_of(label)];
    total += safe_div(2.0 * p * r, p + r);
  }
  return total / 2.0;
}

std::vector<std::size_t> FoldPlan::fold(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::complement(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != f) out.push_back(i);
  }
  return out;
}

FoldPlan kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("k must be at least 2");
  if (n < k) throw ArgumentError("need at least k instances for k folds");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));
  FoldPlan plan;
  plan.k = k;
  plan.assignments.resize(n);
  for (std::size_t i = 0; i < n; ++i) plan.assignments[perm[i]] = i % k;
  return plan;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("paired samples differ in length");
  if (a.size() < 2) throw ArgumentError("paired t-test needs at least two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  if (var == 0.0) throw ArgumentError("degenerate difference vector");
  TTestResult r;
  r.dof = static_cast<double>(n - 1);
  r.t = mean / std::sqrt(var / static_cast<double>(n));
  const boost::math::students_t dist(r.dof);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("Mann-Whitney U needs two non-empty samples");
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  double tie_term = 0.0;
  const auto ranks = pooled_ranks(pooled, &tie_term);

  const double offset = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0);
  const double mean_u = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;

  MannWhitneyResult r;
  r.u = rank_sum - offset;
  const double observed = std::abs(r.u - mean_u);

  if (n1 <= 8 && n2 <= 8) {
    r.exact = true;
    std::size_t extreme = 0;
    std::size_t total = 0;
    const std::uint32_t limit = 1U << n;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n1) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1U << i)) s += ranks[i];
      }
      ++total;
      if (std::abs(s - offset - mean_u) >= observed - 1e-9) ++extreme;
    }
    r.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    return r;
  }

  const double nn = static_cast<double>(n);
  const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) {
    r.p_value = 1.0;
    return r;
  }
  const double z = std::max(0.0, observed - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

std::string format_confusion_csv(const ConfusionMatrix& m) {
  std::string out = "gold\\pred";
  for (auto c : kCanonicalLabels) out += "," + std::string(to_string(c));
  out += '\n';
  for (auto g : kCanonicalLabels) {
    out += to_string(g);
    for (auto p : kCanonicalLabels) out += "," + std::to_string(m[index_of(g)][index_of(p)]);
    out += '\n';
  }
  return out;
}

std::string format_report_csv(const EvalReport& report) {
  std::string out = "topic,F_favor,F_against,F_avg\n";
  for (const auto& t : report.per_topic) {
    out += t.topic + "," + fixed4(t.scores.f_favor) + "," + fixed4(t.scores.f_against) + "," + fixed4(t.scores.f_avg) +
           "\n";
  }
  out += "overall," + fixed4(report.overall.f_favor) + "," + fixed4(report.overall.f_against) + "," +
         fixed4(report.overall.f_avg) + "\n";
  return out;
}

std::string format_report_table(const EvalReport& report, std::string_view model_name) {
  std::string header = "Model";
  std::string row(model_name);
  const std::size_t width = std::max<std::size_t>(row.size(), 5) + 2;
  header.resize(width, ' ');
  row.resize(width, ' ');
  const auto cell = [](std::string s) {
    if (s.size() < 10) s.insert(0, 10 - s.size(), ' ');
    return s + " ";
  };
  for (const auto& t : report.per_topic) {
    header += cell(t.topic.size() > 10 ? t.topic.substr(0, 10) : t.topic);
    row += cell(pct(t.scores.f_avg));
  }
  header += "|" + cell("F_favor") + cell("F_against") + cell("F_avg");
  row += "|" + cell(pct(report.overall.f_favor)) + cell(pct(report.overall.f_against)) + cell(pct(report.overall.f_avg));
  return header + "\n" + row + "\n";
}

}  // namespace stance
