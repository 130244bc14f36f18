// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "stance/analysis.hpp"
#include "stance/bundle.hpp"
#include "stance/eval.hpp"
#include "stance/experiment.hpp"
#include "stance/synth.hpp"

using namespace stance;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. SVM oracle equivalence

Outcome svm_oracle() {
  const auto start = Clock::now();
  std::mt19937 gen(20240601);
  const double Cs[] = {0.1, 1.0, 10.0};
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 5;
    const std::size_t dim = 1 + gen() % 4;
    std::vector<SparseBooleanVector> xs;
    std::vector<int> ys;
    oracle::DualProblem p;
    do {
      xs.clear();
      ys.clear();
      p.x.clear();
      for (std::size_t i = 0; i < n; ++i) {
        SparseBooleanVector v{{}, dim};
        std::vector<double> dense(dim, 0.0);
        for (std::uint32_t d = 0; d < dim; ++d) {
          if (gen() % 2) {
            v.indices.push_back(d);
            dense[d] = 1.0;
          }
        }
        xs.push_back(v);
        p.x.push_back(dense);
        ys.push_back(gen() % 2 ? 1 : -1);
      }
    } while (std::set<int>(ys.begin(), ys.end()).size() < 2);
    p.y = ys;
    p.C = Cs[trial % 3];

    TrainConfig cfg;  // default tolerance and epoch cap
    cfg.C = p.C;
    const auto model = train_binary(xs, ys, cfg);
    const auto ref = oracle::solve_dual(p);
    worst = std::max(worst, std::abs(model.dual_objective - ref.objective));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-6 && elapsed < 30.0,
          fmt("200 problems, max |dual - oracle| = %.2e (<= 1e-6), %.2f s (< 30 s)", worst, elapsed)};
}

// ---------------------------------------------------------------------------
// 2. Scorer golden fixtures

struct Fixture {
  const char* name;
  std::vector<std::string> topics;  // empty: single topic
  std::string gold;
  std::string pred;
  const char* f_favor;
  const char* f_against;
  const char* f_avg;
  std::vector<std::size_t> matrix;  // row-major [gold][pred], A F N; empty = unchecked
};

std::vector<StanceLabel> to_labels(const std::string& s) {
  std::vector<StanceLabel> out;
  for (char c : s) out.push_back(c == 'A' ? StanceLabel::Against : c == 'F' ? StanceLabel::Favor : StanceLabel::None);
  return out;
}

Outcome scorer_fixtures() {
  // Expected values worked out by hand from the confusion counts.
  const std::vector<Fixture> fixtures = {
      // P_F = 1/2, R_F = 1; P_A = R_A = 1
      {"worked example", {}, "FANA", "FAFA", "0.6667", "1.0000", "0.8333", {2, 0, 0, 0, 1, 0, 0, 1, 0}},
      {"perfect mix", {}, "AFNAFN", "AFNAFN", "1.0000", "1.0000", "1.0000", {2, 0, 0, 0, 2, 0, 0, 0, 2}},
      {"all predicted None", {}, "FAN", "NNN", "0.0000", "0.0000", "0.0000", {0, 0, 1, 0, 0, 1, 0, 0, 1}},
      // no Favor anywhere: F_F = 0; A: P = 1, R = 1/2
      {"absent Favor class", {}, "AAN", "ANN", "0.0000", "0.6667", "0.3333", {1, 0, 1, 0, 0, 0, 0, 0, 1}},
      // Favor predicted but never gold, Against never right
      {"false-positive only", {}, "AN", "FA", "0.0000", "0.0000", "0.0000", {0, 1, 0, 0, 0, 0, 1, 0, 0}},
      {"gold and pred all None", {}, "NNN", "NNN", "0.0000", "0.0000", "0.0000", {0, 0, 0, 0, 0, 0, 0, 0, 3}},
      {"swapped polarity", {}, "FA", "AF", "0.0000", "0.0000", "0.0000", {0, 1, 0, 1, 0, 0, 0, 0, 0}},
      // F: P = 1, R = 2/3 -> 0.8; A: P = 1/2, R = 1 -> 2/3
      {"partial recall", {}, "FFFA", "FFAA", "0.8000", "0.6667", "0.7333", {1, 0, 0, 1, 2, 0, 0, 0, 0}},
      // gold None predicted polar counts against precision
      {"None as false positive", {}, "NNFA", "FAFA", "0.6667", "0.6667", "0.6667", {1, 0, 0, 0, 1, 0, 1, 1, 0}},
      // F: P = R = 1/2; A: P = 1, R = 1/2
      {"mixed errors", {}, "FFAANN", "FNANNF", "0.5000", "0.6667", "0.5833", {1, 0, 1, 0, 1, 1, 0, 1, 1}},
      // pooled over topics X and Y: F: P = 1/2, R = 1; A: P = 1, R = 1/2
      {"pooled topics", {"X", "Y", "Y"}, "FAA", "FFA", "0.6667", "0.6667", "0.6667", {1, 1, 0, 0, 1, 0, 0, 0, 0}},
      {"single None predicted Favor", {}, "N", "F", "0.0000", "0.0000", "0.0000", {0, 0, 0, 0, 0, 0, 0, 1, 0}},
  };

  std::size_t ok = 0;
  std::string failures;
  for (const auto& fx : fixtures) {
    auto topics = fx.topics;
    if (topics.empty()) topics.assign(fx.gold.size(), "T");
    const auto r = score_semeval(to_labels(fx.gold), to_labels(fx.pred), topics);
    bool good = fmt("%.4f", r.overall.f_favor) == fx.f_favor && fmt("%.4f", r.overall.f_against) == fx.f_against &&
                fmt("%.4f", r.overall.f_avg) == fx.f_avg;
    for (std::size_t k = 0; k < fx.matrix.size(); ++k) good = good && r.confusion[k / 3][k % 3] == fx.matrix[k];
    if (good) {
      ++ok;
    } else {
      failures += std::string(" [") + fx.name + "]";
    }
  }

  // Per-topic restriction on the pooled fixture: X = (1, 0), Y = (0, 2/3).
  const std::vector<std::string> topics = {"X", "Y", "Y"};
  const auto pooled = score_semeval(to_labels("FAA"), to_labels("FFA"), topics);
  const bool per_topic = fmt("%.4f", pooled.topic("X")->scores.f_avg) == std::string("0.5000") &&
                         fmt("%.4f", pooled.topic("Y")->scores.f_avg) == std::string("0.3333");
  if (!per_topic) failures += " [per-topic split]";

  return {ok == fixtures.size() && per_topic && fixtures.size() >= 10,
          fmt("%zu/%zu fixtures exact to 4 decimals, per-topic split %s", ok, fixtures.size(),
              per_topic ? "ok" : "wrong") +
              failures};
}

// ---------------------------------------------------------------------------
// Shared synthetic corpus for criteria 3 and 4

SynthConfig planted_config() {
  SynthConfig cfg;  // five topics, 200 users per topic
  cfg.homophily = 0.9;
  cfg.text_signal = 0.0;
  cfg.silent_fraction = 0.3;
  cfg.stance_prior = {{0.5, 0.5, 0.0}};
  cfg.seed = 42;
  return cfg;
}

std::array<double, 3> prior_of(const std::vector<StanceLabel>& labels) {
  std::array<double, 3> p{};
  for (auto l : labels) p[index_of(l)] += 1.0;
  for (auto& v : p) v /= static_cast<double>(labels.size());
  return p;
}

struct ModeRun {
  std::vector<StanceLabel> gold;
  std::vector<StanceLabel> pred;
  std::vector<std::string> topics;
  std::vector<bool> silent;
};

// Per-topic training and prediction over every topic of the corpus.
ModeRun run_cells(const SynthCorpus& corpus, const FeatureSetSelector& selector, ClassifierMode mode) {
  ModeRun run;
  std::map<std::string, bool> silent;
  for (const auto& t : corpus.truth) silent[t.user_id] = t.silent;
  for (const auto& topic : corpus.train.topics) {
    const auto model = fit_model(corpus.train.subset_topic(topic), selector, mode, TrainConfig{}, 1, topic);
    const auto test = corpus.test.subset_topic(topic);
    const auto pred = predict_all(model, test);
    for (std::size_t i = 0; i < test.instances.size(); ++i) {
      run.gold.push_back(test.instances[i].label);
      run.pred.push_back(pred[i]);
      run.topics.push_back(topic);
      run.silent.push_back(silent.at(test.instances[i].author_id));
    }
  }
  return run;
}

EvalReport score(const ModeRun& run, bool silent_only = false) {
  ModeRun sub;
  for (std::size_t i = 0; i < run.gold.size(); ++i) {
    if (silent_only && !run.silent[i]) continue;
    sub.gold.push_back(run.gold[i]);
    sub.pred.push_back(run.pred[i]);
    sub.topics.push_back(run.topics[i]);
  }
  return score_semeval(sub.gold, sub.pred, sub.topics);
}

// ---------------------------------------------------------------------------
// 3 and 4. Planted-signal recovery and silent users

Outcome planted_recovery(const SynthCorpus& corpus, std::map<std::string, ModeRun>& runs) {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (const char* sel : {"IN", "PN", "CN"}) {
    runs[sel] = run_cells(corpus, FeatureSetSelector::parse(sel), ClassifierMode::Binary);
    const double f = score(runs[sel]).overall.f_avg;
    pass = pass && f >= 0.90;
    detail += fmt("%s %.4f, ", sel, f);
  }
  const auto txt = run_cells(corpus, FeatureSetSelector::parse("TXT"), ClassifierMode::Binary);
  const double f_txt = score(txt).overall.f_avg;

  std::vector<StanceLabel> train_labels;
  for (const auto& i : corpus.train.instances) {
    if (i.label != StanceLabel::None) train_labels.push_back(i.label);
  }
  const double chance = chance_f_avg(prior_of(txt.gold), prior_of(train_labels));
  const bool txt_ok = std::abs(f_txt - chance) <= 0.10;
  const double elapsed = seconds_since(start);
  pass = pass && txt_ok && elapsed < 120.0;
  return {pass, "binary F_avg " + detail + fmt("(>= 0.90); TXT %.4f vs chance %.4f (|diff| <= 0.10); %.1f s (< 120 s)",
                                                f_txt, chance, elapsed)};
}

Outcome silent_users(std::map<std::string, ModeRun>& runs) {
  bool pass = true;
  std::string detail;
  std::size_t count = 0;
  for (const char* sel : {"PN", "CN"}) {
    const auto r = score(runs.at(sel), true);
    count = r.count;
    pass = pass && r.overall.f_avg >= 0.85;
    detail += fmt("%s %.4f, ", sel, r.overall.f_avg);
  }
  return {pass && count > 0, "silent-only F_avg " + detail + fmt("(>= 0.85) over %zu instances", count)};
}

// ---------------------------------------------------------------------------
// 5. Binary vs ternary structure

Outcome binary_vs_ternary() {
  SynthConfig cfg;
  cfg.stance_prior = {{0.4, 0.4, 0.2}};
  cfg.homophily = 0.3;
  cfg.text_signal = 0.0;
  cfg.seed = 7;
  const auto corpus = generate(cfg);
  const auto sel = FeatureSetSelector::parse("IN");
  const auto bin = score(run_cells(corpus, sel, ClassifierMode::Binary));
  const auto ter = score(run_cells(corpus, sel, ClassifierMode::Ternary));
  const auto none_col = bin.confusion[0][2] + bin.confusion[1][2] + bin.confusion[2][2];
  const auto tp = [](const EvalReport& r) { return r.confusion[0][0] + r.confusion[1][1]; };
  return {none_col == 0 && tp(bin) > tp(ter),
          fmt("binary None-column total %zu (== 0); TP(F)+TP(A) binary %zu vs ternary %zu (strictly more)", none_col,
              tp(bin), tp(ter))};
}

// ---------------------------------------------------------------------------
// 6. Imbalance collapse

Outcome imbalance_collapse() {
  // One topic sized so the training split holds about 317 instances.
  SynthConfig cfg;
  cfg.topics = {"Climate Change is a Real Concern"};
  cfg.users_per_topic = 453;
  cfg.tweets_per_user = 1;
  // favor:against:none = 176:8:133, stored as [Against, Favor, None]
  cfg.stance_prior = {{8.0, 176.0, 133.0}};
  cfg.text_signal = 0.5;
  cfg.homophily = 0.9;
  cfg.seed = 11;
  const auto corpus = generate(cfg);
  std::array<std::size_t, 3> train_counts{};
  for (const auto& i : corpus.train.instances) ++train_counts[index_of(i.label)];
  const auto run = run_cells(corpus, FeatureSetSelector::parse("TXT"), ClassifierMode::Ternary);
  const auto r = score(run);
  const auto recall = class_score(r.confusion, StanceLabel::Against).recall;
  const std::size_t gold_against = r.confusion[0][0] + r.confusion[0][1] + r.confusion[0][2];
  const auto collapsed = collapsed_class(r.confusion);
  return {gold_against > 0 && recall <= 0.25,
          fmt("train F:A:N = %zu:%zu:%zu; ternary TXT minority (Against) recall %.4f (<= 0.25) over %zu gold "
              "instances; collapse flag: %s",
              train_counts[1], train_counts[0], train_counts[2], recall, gold_against,
              collapsed ? std::string(to_string(*collapsed)).c_str() : "none")};
}

// ---------------------------------------------------------------------------
// 7. Consistency property

Outcome consistency() {
  // Moderate homophily and a None class, so predictions are often wrong and
  // uniformity cannot come from accuracy alone.
  SynthConfig cfg;
  cfg.homophily = 0.6;
  cfg.text_signal = 0.5;
  cfg.silent_fraction = 0.3;
  cfg.seed = 43;
  const auto corpus = generate(cfg);
  const char* selectors[] = {"IN_AT", "IN_DM", "PN_AT", "PN_DM", "CN_FR", "CN_FL", "IN", "PN", "CN", "IN+PN+CN"};
  double worst = 1.0;
  std::size_t authors = 0;
  for (const char* s : selectors) {
    for (auto mode : {ClassifierMode::Binary, ClassifierMode::Ternary}) {
      for (const auto& topic : corpus.train.topics) {
        const auto model = fit_model(corpus.train.subset_topic(topic), FeatureSetSelector::parse(s), mode,
                                     TrainConfig{}, 1, topic);
        const auto test = corpus.test.subset_topic(topic);
        const auto report = user_consistency(test, predict_all(model, test));
        authors += report.authors.size();
        worst = std::min(worst, report.authors.empty() ? 0.0 : report.uniform_fraction());
      }
    }
  }
  return {worst == 1.0, fmt("minimum uniform fraction %.4f (== 1) across 10 selectors x 2 modes, %zu author groups",
                            worst, authors)};
}

// ---------------------------------------------------------------------------
// 8. Jaccard suite

Outcome jaccard_suite() {
  std::mt19937 gen(8);
  std::size_t agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::set<std::string> a;
    std::set<std::string> b;
    const int universe = 1 + static_cast<int>(gen() % 40);
    for (int k = static_cast<int>(gen() % 25); k > 0; --k) a.insert("x" + std::to_string(gen() % universe));
    for (int k = static_cast<int>(gen() % 25); k > 0; --k) b.insert("x" + std::to_string(gen() % universe));
    if (jaccard(a, b) == oracle::naive_jaccard(a, b)) ++agree;
  }

  // Planted profiles: each user has 100 distinct accounts split between IN_AT
  // and PN_AT with ten shared, so every per-user Jaccard is 10/100.
  ProfileMap profiles;
  for (int u = 0; u < 500; ++u) {
    auto& p = profiles["u" + std::to_string(u)];
    p.user_id = "u" + std::to_string(u);
    std::vector<int> ids(1000);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), gen);
    for (int k = 0; k < 100; ++k) {
      const auto name = "acct" + std::to_string(ids[static_cast<std::size_t>(k)]);
      if (k < 10) {
        p.in_mentions.insert(name);
        p.pn_mentions.insert(name);
      } else if (k < 55) {
        p.in_mentions.insert(name);
      } else {
        p.pn_mentions.insert(name);
      }
    }
  }
  const double profile_mean = network_overlap(profiles, ProfileField::InMentions, ProfileField::PnMentions).mean();

  // Planted rankings: after each rank N both lists share round(2N/11) accounts,
  // the count that makes |shared| / |union| = 10% for two top-N sets.
  RankedFeatures a;
  RankedFeatures b;
  a.source = "IN";
  b.source = "PN";
  std::size_t shared = 0;
  std::size_t next = 0;
  const std::size_t n_max = 1000;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double w = static_cast<double>(n_max - n);
    const auto target = static_cast<std::size_t>(std::llround(2.0 * static_cast<double>(n) / 11.0));
    if (target > shared) {
      const auto name = "acct" + std::to_string(next++);
      a.entries.emplace_back("inat:" + name, w);
      b.entries.emplace_back("pnat:" + name, w);
      ++shared;
    } else {
      a.entries.emplace_back("inat:acct" + std::to_string(next++), w);
      b.entries.emplace_back("pnat:acct" + std::to_string(next++), w);
    }
  }
  const auto curve = topn_overlap_curve(a, b, nullptr, n_max);
  double worst = 0.0;
  for (const auto& point : curve) {
    if (point.n >= 20) worst = std::max(worst, std::abs(point.jaccard - 0.10));
  }

  const bool pass = agree == 1000 && std::abs(profile_mean - 0.10) <= 0.03 && worst <= 0.03;
  return {pass, fmt("%zu/1000 pairs agree with the double-loop oracle; planted 10%%: profile mean %.4f, curve max "
                    "deviation %.4f for N in [20, 1000] (<= 0.03)",
                    agree, profile_mean, worst)};
}

// ---------------------------------------------------------------------------
// 9. Determinism of the experiment command

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  SynthConfig cfg;
  cfg.users_per_topic = 80;
  cfg.text_signal = 0.5;
  cfg.seed = 9;
  const auto corpus = generate(cfg);
  ExperimentSpec spec;
  spec.selectors = {FeatureSetSelector::parse("TXT"), FeatureSetSelector::parse("IN"),
                    FeatureSetSelector::parse("TXT+IN"), FeatureSetSelector::parse("CN")};
  spec.modes = {ClassifierMode::Ternary, ClassifierMode::Binary};
  spec.config.seed = 123;
  spec.jobs = 4;
  const auto base = fs::temp_directory_path() / "stance_acceptance_determinism";
  fs::remove_all(base);
  for (const char* run : {"first", "second"}) {
    write_experiment(run_experiment(corpus.train, corpus.test, spec), corpus.train, corpus.test, spec, base / run);
  }
  const auto one = slurp(base / "first" / "master.csv");
  const auto two = slurp(base / "second" / "master.csv");
  return {!one.empty() && one == two, fmt("two runs with 4 jobs: master.csv %zu and %zu bytes, %s", one.size(),
                                          two.size(), one == two ? "identical" : "different")};
}

// ---------------------------------------------------------------------------
// 10. Bundle round trip

Outcome bundle_round_trip() {
  SynthConfig cfg;
  cfg.topics = {"Atheism"};
  cfg.text_signal = 0.7;
  cfg.seed = 10;
  const auto corpus = generate(cfg);
  const auto base = fs::temp_directory_path() / "stance_acceptance_bundle";
  fs::remove_all(base);
  std::mt19937 gen(10);
  std::size_t identical = 0;
  std::size_t total = 0;
  for (auto mode : {ClassifierMode::Ternary, ClassifierMode::Binary}) {
    const auto model =
        fit_model(corpus.train, FeatureSetSelector::parse("TXT+IN+PN"), mode, TrainConfig{}, 1, "Atheism");
    const auto dir = base / std::string(to_string(mode));
    save_model(model, dir);
    const auto loaded = load_model(dir);
    const std::size_t dim = model.space().size();
    for (int k = 0; k < 500; ++k) {
      SparseBooleanVector x{{}, dim};
      const double density = static_cast<double>(gen() % 100) / 1000.0;
      std::bernoulli_distribution on(density);
      for (std::uint32_t d = 0; d < dim; ++d) {
        if (on(gen)) x.indices.push_back(d);
      }
      const auto s1 = model.decision_values(x);
      const auto s2 = loaded.decision_values(x);
      const bool same = s1.size() == s2.size() && std::memcmp(s1.data(), s2.data(), s1.size() * sizeof(double)) == 0 &&
                        model.predict(x) == loaded.predict(x);
      identical += same ? 1 : 0;
      ++total;
    }
  }
  return {identical == total && total == 1000,
          fmt("%zu/%zu random vectors give bitwise-identical scores and labels after save/load", identical, total)};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  SynthCorpus planted;
  std::map<std::string, ModeRun> runs;

  criteria.emplace_back("SVM oracle equivalence", svm_oracle);
  criteria.emplace_back("Scorer golden tests", scorer_fixtures);
  criteria.emplace_back("Planted-signal recovery", [&] {
    planted = generate(planted_config());
    return planted_recovery(planted, runs);
  });
  criteria.emplace_back("Silent-user check", [&] { return silent_users(runs); });
  criteria.emplace_back("Binary-vs-ternary structure", binary_vs_ternary);
  criteria.emplace_back("Imbalance collapse", imbalance_collapse);
  criteria.emplace_back("Consistency property", consistency);
  criteria.emplace_back("Jaccard suite", jaccard_suite);
  criteria.emplace_back("Determinism", determinism);
  criteria.emplace_back("Model bundle round-trip", bundle_round_trip);

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
