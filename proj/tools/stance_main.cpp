// stance: command-line front end for the stance detection toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 experiment cell failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stance/analysis.hpp"
#include "stance/bundle.hpp"
#include "stance/corpus.hpp"
#include "stance/error.hpp"
#include "stance/eval.hpp"
#include "stance/experiment.hpp"
#include "stance/synth.hpp"

namespace fs = std::filesystem;
using namespace stance;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kCellFailure = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_all(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct TrainFlags {
  double C = 1.0;
  double tol = 1e-4;
  int max_iter = 1000;
  std::uint64_t seed = 1;
  std::string loss = "hinge";
  std::size_t min_df = 1;

  TrainConfig config() const {
    TrainConfig cfg;
    cfg.C = C;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.seed = seed;
    cfg.loss = parse_loss(loss);
    cfg.validate();
    return cfg;
  }

  void add_to(CLI::App& cmd) {
    cmd.add_option("--C", C, "SVM regularization trade-off")->capture_default_str();
    cmd.add_option("--tol", tol, "dual optimality tolerance")->capture_default_str();
    cmd.add_option("--max-iter", max_iter, "maximum epochs")->capture_default_str();
    cmd.add_option("--seed", seed, "seed for every random choice")->capture_default_str();
    cmd.add_option("--loss", loss, "hinge or squared_hinge")->capture_default_str();
    cmd.add_option("--min-df", min_df, "minimum training document frequency of a feature")->capture_default_str();
  }
};

std::vector<FeatureSetSelector> parse_selectors(const std::vector<std::string>& raw) {
  if (raw.empty()) throw UsageError("at least one --selector is required");
  std::vector<FeatureSetSelector> out;
  for (const auto& s : raw) {
    auto sel = FeatureSetSelector::parse(s);
    if (std::find(out.begin(), out.end(), sel) == out.end()) out.push_back(sel);
  }
  return out;
}

std::vector<ClassifierMode> parse_modes(const std::vector<std::string>& raw) {
  std::vector<ClassifierMode> out;
  for (const auto& s : raw) {
    const auto m = parse_mode(s);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) out.push_back(ClassifierMode::Binary);
  return out;
}

bool needs_profiles(const std::vector<FeatureSetSelector>& selectors) {
  for (const auto& s : selectors) {
    for (auto f : s.families()) {
      if (f != FeatureFamily::Txt) return true;
    }
  }
  return false;
}

Dataset load_dataset(const std::string& tweets, const std::string& profiles, bool require_profile) {
  auto instances = load_semeval_tsv(tweets);
  ProfileMap map;
  if (!profiles.empty()) {
    auto loaded = load_network_profiles(profiles);
    if (loaded.duplicate_user_ids > 0) {
      std::cerr << "warning: " << loaded.duplicate_user_ids << " duplicate user_id record(s) in " << profiles
                << "; the last one was kept\n";
    }
    map = std::move(loaded.profiles);
  }
  auto joined = join(std::move(instances), map, require_profile && !profiles.empty());
  if (joined.dropped > 0) {
    std::cerr << "note: dropped " << joined.dropped << " instance(s) of " << tweets << " without a profile\n";
  }
  return std::move(joined.dataset);
}

// Bundles of one system, keyed by topic.
std::map<std::string, LinearModel> load_system(const std::string& path) {
  std::map<std::string, LinearModel> out;
  for (const auto& dir : find_bundles(path)) {
    auto model = load_model(dir);
    const std::string topic = model.topic();
    if (!out.emplace(topic, std::move(model)).second) {
      throw DataError("two bundles for topic '" + topic + "' under " + path);
    }
  }
  return out;
}

const LinearModel& model_for(const std::map<std::string, LinearModel>& system, const std::string& topic) {
  if (auto it = system.find(topic); it != system.end()) return it->second;
  if (auto it = system.find(""); it != system.end()) return it->second;
  throw DataError("no model bundle for topic '" + topic + "'");
}

void check_selector(const std::map<std::string, LinearModel>& system, const std::string& requested) {
  if (requested.empty()) return;
  const auto sel = FeatureSetSelector::parse(requested);
  for (const auto& [topic, model] : system) {
    if (!(model.selector() == sel)) {
      throw DataError("feature-space mismatch: bundle for '" + topic + "' uses " + model.selector().to_string() +
                      ", requested " + sel.to_string());
    }
  }
}

struct Scored {
  std::vector<StanceLabel> gold;
  std::vector<StanceLabel> pred;
  std::vector<std::string> topics;
  std::vector<std::string> ids;
};

Scored predict_system(const std::map<std::string, LinearModel>& system, const Dataset& data) {
  Scored s;
  for (const auto& inst : data.instances) {
    const auto& model = model_for(system, inst.topic);
    const auto features = extract_features(inst, data.profile_for(inst), model.selector());
    s.gold.push_back(inst.label);
    s.pred.push_back(model.predict(vectorize(features, model.space())));
    s.topics.push_back(inst.topic);
    s.ids.push_back(inst.tweet_id);
  }
  return s;
}

Scored read_prediction_file(const std::string& path) {
  Scored s;
  std::istringstream in(read_all(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 || line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream row(line);
    std::string col;
    while (std::getline(row, col, '\t')) cols.push_back(col);
    if (cols.size() != 4) throw DataError(path + ": line " + std::to_string(line_no) + " needs ID, Target, Gold, Pred");
    try {
      s.ids.push_back(cols[0]);
      s.topics.push_back(cols[1]);
      s.gold.push_back(parse_stance(cols[2]));
      s.pred.push_back(parse_stance(cols[3]));
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what() + " at line " + std::to_string(line_no));
    }
  }
  return s;
}

// SemEval gold file plus a predictions file in the same format, matched by ID.
Scored read_gold_and_guess(const std::string& gold_path, const std::string& pred_path) {
  const auto gold = load_semeval_tsv(gold_path);
  const auto pred = load_semeval_tsv(pred_path);
  std::map<std::string, StanceLabel> guess;
  for (const auto& p : pred) guess[p.tweet_id] = p.label;
  Scored s;
  for (const auto& g : gold) {
    const auto it = guess.find(g.tweet_id);
    if (it == guess.end()) throw DataError(pred_path + ": no prediction for ID " + g.tweet_id);
    s.ids.push_back(g.tweet_id);
    s.topics.push_back(g.topic);
    s.gold.push_back(g.label);
    s.pred.push_back(it->second);
  }
  return s;
}

std::string format_predictions(const Scored& s) {
  std::string out = "ID\tTarget\tGold\tPred\n";
  for (std::size_t i = 0; i < s.ids.size(); ++i) {
    out += s.ids[i] + "\t" + s.topics[i] + "\t" + std::string(to_semeval(s.gold[i])) + "\t" +
           std::string(to_semeval(s.pred[i])) + "\n";
  }
  return out;
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", p);
  return buf;
}

// ---------------------------------------------------------------------------

int run_synth(const SynthConfig& base, const std::string& out, const std::string& topics, const std::string& prior,
              std::size_t community, std::size_t shared, std::size_t per_user) {
  SynthConfig cfg = base;
  if (!topics.empty()) cfg.topics = split_list(topics, ',');
  if (!prior.empty()) {
    cfg.stance_prior.clear();
    for (const auto& entry : split_list(prior, ';')) {
      const auto parts = split_list(entry, ':');
      if (parts.size() != 3) throw UsageError("--prior expects favor:against:none[;...]");
      // Flag order is favor:against:none; storage is canonical [Against, Favor, None].
      cfg.stance_prior.push_back({std::stod(parts[1]), std::stod(parts[0]), std::stod(parts[2])});
    }
  }
  for (auto& pool : cfg.pools) pool = PoolSpec{community, shared, per_user};
  const auto corpus = generate(cfg);
  write_corpus(corpus, out);
  std::cout << "wrote " << corpus.train.instances.size() << " train and " << corpus.test.instances.size()
            << " test instances to " << out << "\n";
  return 0;
}

int run_train(const std::string& tweets, const std::string& profiles, const std::vector<std::string>& selector_flags,
              const std::vector<std::string>& mode_flags, const TrainFlags& flags, const std::string& out,
              bool require_profile) {
  const auto selectors = parse_selectors(selector_flags);
  const auto modes = parse_modes(mode_flags);
  const auto cfg = flags.config();
  if (needs_profiles(selectors) && profiles.empty()) {
    throw UsageError("a network selector needs --profiles");
  }
  const auto data = load_dataset(tweets, profiles, require_profile);
  for (const auto& topic : data.topics) {
    const auto subset = data.subset_topic(topic);
    for (const auto& sel : selectors) {
      for (auto mode : modes) {
        const auto model = fit_model(subset, sel, mode, cfg, flags.min_df, topic);
        const fs::path dir = fs::path(out) / (std::string(to_string(mode)) + "__" + sel.to_string()) / slug(topic);
        save_model(model, dir);
        std::cout << "saved " << dir.string() << " (" << model.space().size() << " features)\n";
      }
    }
  }
  return 0;
}

int run_predict(const std::string& model_path, const std::string& tweets, const std::string& profiles,
                const std::string& selector, const std::string& out) {
  const auto system = load_system(model_path);
  check_selector(system, selector);
  const auto data = load_dataset(tweets, profiles, false);
  const auto scored = predict_system(system, data);
  const auto text = format_predictions(scored);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_all(out, text);
  }
  return 0;
}

int run_evaluate(const std::vector<std::string>& models, const std::vector<std::string>& prediction_files,
                 const std::string& gold, const std::string& guess, const std::string& tweets,
                 const std::string& profiles, const std::string& selector, bool compare, const std::string& unit,
                 const std::string& out) {
  std::vector<std::pair<std::string, Scored>> systems;
  if (!models.empty()) {
    if (tweets.empty()) throw UsageError("--model needs --tweets");
    const auto data = load_dataset(tweets, profiles, false);
    for (const auto& m : models) {
      const auto system = load_system(m);
      check_selector(system, selector);
      systems.emplace_back(m, predict_system(system, data));
    }
  }
  for (const auto& p : prediction_files) systems.emplace_back(p, read_prediction_file(p));
  if (!gold.empty() || !guess.empty()) {
    if (gold.empty() || guess.empty()) throw UsageError("--gold and --guess go together");
    systems.emplace_back(guess, read_gold_and_guess(gold, guess));
  }
  if (systems.empty()) throw UsageError("nothing to evaluate: give --model, --predictions or --gold/--guess");

  std::vector<EvalReport> reports;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const auto& [name, s] = systems[i];
    reports.push_back(score_semeval(s.gold, s.pred, s.topics));
    std::cout << format_report_table(reports.back(), fs::path(name).filename().string());
    if (!out.empty()) {
      const fs::path dir = systems.size() == 1 ? fs::path(out) : fs::path(out) / ("system" + std::to_string(i + 1));
      write_all(dir / "report.txt", format_report_table(reports.back(), name));
      write_all(dir / "report.csv", format_report_csv(reports.back()));
      write_all(dir / "confusion.csv", format_confusion_csv(reports.back().confusion));
      for (const auto& t : reports.back().per_topic) {
        write_all(dir / ("confusion__" + slug(t.topic) + ".csv"), format_confusion_csv(t.confusion));
      }
    }
  }

  if (compare) {
    if (systems.size() != 2) throw UsageError("--compare needs exactly two systems");
    std::vector<double> a;
    std::vector<double> b;
    if (unit == "topic") {
      for (const auto& t : reports[0].per_topic) {
        const auto* other = reports[1].topic(t.topic);
        if (!other) continue;
        a.push_back(t.scores.f_avg);
        b.push_back(other->scores.f_avg);
      }
    } else if (unit == "instance") {
      const auto& sa = systems[0].second;
      const auto& sb = systems[1].second;
      if (sa.ids != sb.ids) throw DataError("systems were not scored on the same instances");
      for (std::size_t i = 0; i < sa.ids.size(); ++i) {
        a.push_back(sa.pred[i] == sa.gold[i] ? 1.0 : 0.0);
        b.push_back(sb.pred[i] == sb.gold[i] ? 1.0 : 0.0);
      }
    } else {
      throw UsageError("--pair-unit must be topic or instance");
    }
    std::string csv = "test,statistic,p_value,units\n";
    try {
      const auto t = paired_t_test(a, b);
      csv += "paired_t," + format_p(t.t) + "," + format_p(t.p_value) + "," + std::to_string(a.size()) + "\n";
    } catch (const ArgumentError& e) {
      csv += "paired_t,NA,NA," + std::to_string(a.size()) + "\n";
      std::cerr << "t-test: " << e.what() << "\n";
    }
    const auto u = mann_whitney_u(a, b);
    csv += std::string(u.exact ? "mann_whitney_u_exact," : "mann_whitney_u_normal,") + format_p(u.u) + "," +
           format_p(u.p_value) + "," + std::to_string(a.size()) + "\n";
    std::cout << csv;
    if (!out.empty()) write_all(fs::path(out) / "compare.csv", csv);
  }
  return 0;
}

int run_experiment_cmd(const std::string& train_path, const std::string& test_path, const std::string& profiles,
                       const std::vector<std::string>& selector_flags, const std::vector<std::string>& mode_flags,
                       const TrainFlags& flags, ExperimentSpec spec, const std::string& out, bool require_profile) {
  spec.selectors = parse_selectors(selector_flags);
  spec.modes = parse_modes(mode_flags);
  spec.config = flags.config();
  spec.min_df = flags.min_df;
  if (needs_profiles(spec.selectors) && profiles.empty()) throw UsageError("a network selector needs --profiles");
  const auto train = load_dataset(train_path, profiles, require_profile);
  const auto test = load_dataset(test_path, profiles, require_profile);
  const auto result = run_experiment(train, test, spec);
  write_experiment(result, train, test, spec, out);
  std::cout << read_all(fs::path(out) / "report.txt");
  if (result.failures > 0) {
    std::cerr << result.failures << " experiment cell(s) failed; see " << (fs::path(out) / "failures.txt").string()
              << "\n";
    return kCellFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stance detection from text and social-network features"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted homophily");
  SynthConfig synth_cfg;
  std::string synth_out;
  std::string synth_topics;
  std::string synth_prior;
  std::size_t community = 40;
  std::size_t shared = 200;
  std::size_t per_user = 12;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_cfg.seed)->capture_default_str();
  synth->add_option("--topics", synth_topics, "comma-separated topic names");
  synth->add_option("--users-per-topic", synth_cfg.users_per_topic)->capture_default_str();
  synth->add_option("--tweets-per-user", synth_cfg.tweets_per_user)->capture_default_str();
  synth->add_option("--prior", synth_prior, "favor:against:none weights, ';' between per-topic entries");
  synth->add_option("--homophily", synth_cfg.homophily)->capture_default_str();
  synth->add_option("--text-signal", synth_cfg.text_signal)->capture_default_str();
  synth->add_option("--silent-fraction", synth_cfg.silent_fraction)->capture_default_str();
  synth->add_option("--community-pool", community, "accounts per stance community and family")->capture_default_str();
  synth->add_option("--shared-pool", shared, "accounts in the shared pool per family")->capture_default_str();
  synth->add_option("--per-user", per_user, "draws per user and family")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "train one model bundle per topic, selector and mode");
  std::string tweets;
  std::string profiles;
  std::string out;
  std::vector<std::string> selectors;
  std::vector<std::string> modes;
  TrainFlags train_flags;
  bool require_profile = false;
  train->add_option("--tweets", tweets, "training tweets (TSV)")->required();
  train->add_option("--profiles", profiles, "user network profiles (JSON lines)");
  train->add_option("--selector", selectors, "feature families, e.g. TXT or IN_AT+IN_DM")->required();
  train->add_option("--mode", modes, "ternary or binary");
  train->add_option("--out", out, "output directory")->required();
  train->add_flag("--require-profile", require_profile, "drop tweets whose author has no profile");
  train_flags.add_to(*train);

  // predict
  auto* predict = app.add_subcommand("predict", "label tweets with a trained model");
  std::string model_path;
  std::string selector_check;
  predict->add_option("--model", model_path, "bundle, or directory of per-topic bundles")->required();
  predict->add_option("--tweets", tweets, "tweets to label (TSV)")->required();
  predict->add_option("--profiles", profiles);
  predict->add_option("--selector", selector_check, "expected selector of the bundles");
  predict->add_option("--out", out, "prediction TSV (stdout when omitted)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score predictions with the SemEval favor/against rule");
  std::vector<std::string> eval_models;
  std::vector<std::string> prediction_files;
  std::string gold;
  std::string guess;
  bool compare = false;
  std::string pair_unit = "topic";
  evaluate->add_option("--model", eval_models, "system: bundle or directory of per-topic bundles");
  evaluate->add_option("--predictions", prediction_files, "TSV with ID, Target, Gold, Pred");
  evaluate->add_option("--gold", gold, "SemEval gold file");
  evaluate->add_option("--guess", guess, "SemEval-format predictions matching --gold by ID");
  evaluate->add_option("--tweets", tweets, "test tweets for --model");
  evaluate->add_option("--profiles", profiles);
  evaluate->add_option("--selector", selector_check, "expected selector of the bundles");
  evaluate->add_flag("--compare", compare, "paired t-test and Mann-Whitney U between two systems");
  evaluate->add_option("--pair-unit", pair_unit, "topic or instance")->capture_default_str();
  evaluate->add_option("--out", out, "report directory");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run the full selector x mode matrix");
  std::string test_path;
  ExperimentSpec spec;
  TrainFlags exp_flags;
  experiment->add_option("--tweets", tweets, "training tweets (TSV)")->required();
  experiment->add_option("--test", test_path, "test tweets (TSV)")->required();
  experiment->add_option("--profiles", profiles);
  experiment->add_option("--selector", selectors)->required();
  experiment->add_option("--mode", modes);
  experiment->add_option("--out", out)->required();
  experiment->add_option("--jobs", spec.jobs, "concurrent cells")->capture_default_str();
  experiment->add_option("--cv-folds", spec.cv_folds, "k for cross-validation on training data (0 = off)")
      ->capture_default_str();
  experiment->add_option("--top-features", spec.top_features)->capture_default_str();
  experiment->add_option("--curve-n-max", spec.curve_n_max)->capture_default_str();
  experiment->add_option("--bin-width", spec.bin_width)->capture_default_str();
  experiment->add_flag("--require-profile", require_profile);
  exp_flags.add_to(*experiment);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "post-hoc analyses");
  analyze->require_subcommand(1);
  auto* overlap = analyze->add_subcommand("overlap", "per-user Jaccard between two profile sets");
  std::string field_a = "in_mentions";
  std::string field_b = "pn_mentions";
  double bin_width = 5.0;
  overlap->add_option("--profiles", profiles)->required();
  overlap->add_option("--first", field_a)->capture_default_str();
  overlap->add_option("--second", field_b)->capture_default_str();
  overlap->add_option("--bin-width", bin_width)->capture_default_str();
  overlap->add_option("--out", out, "histogram CSV (stdout when omitted)");

  auto* top = analyze->add_subcommand("top", "most influential features of a bundle");
  std::size_t top_n = 20;
  std::string class_name;
  top->add_option("--model", model_path)->required();
  top->add_option("--top", top_n)->capture_default_str();
  top->add_option("--class", class_name, "Favor, Against or None (all classes when omitted)");
  top->add_option("--out", out);

  auto* curve = analyze->add_subcommand("curve", "top-N feature overlap between two or three bundles");
  std::vector<std::string> curve_models;
  std::size_t n_max = 1000;
  curve->add_option("--model", curve_models)->required();
  curve->add_option("--class", class_name)->required();
  curve->add_option("--n-max", n_max)->capture_default_str();
  curve->add_option("--out", out);

  auto* consistency = analyze->add_subcommand("consistency", "per-author uniformity of predictions");
  std::string predictions_path;
  consistency->add_option("--tweets", tweets)->required();
  consistency->add_option("--predictions", predictions_path, "TSV with ID, Target, Gold, Pred")->required();
  consistency->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const auto emit = [&](const std::string& text) {
    if (out.empty()) {
      std::cout << text;
    } else {
      write_all(out, text);
    }
  };

  try {
    if (*synth) return run_synth(synth_cfg, synth_out, synth_topics, synth_prior, community, shared, per_user);
    if (*train) return run_train(tweets, profiles, selectors, modes, train_flags, out, require_profile);
    if (*predict) return run_predict(model_path, tweets, profiles, selector_check, out);
    if (*evaluate) {
      return run_evaluate(eval_models, prediction_files, gold, guess, tweets, profiles, selector_check, compare,
                          pair_unit, out);
    }
    if (*experiment) {
      return run_experiment_cmd(tweets, test_path, profiles, selectors, modes, exp_flags, spec, out, require_profile);
    }
    if (*overlap) {
      const auto dist = network_overlap(load_network_profiles(profiles).profiles, field_a, field_b, bin_width);
      std::cerr << dist.pair_name << ": " << dist.values.size() << " users, " << dist.excluded
                << " excluded, mean " << 100.0 * dist.mean() << "%\n";
      emit(format_histogram_csv(dist));
      return 0;
    }
    if (*top) {
      const auto model = load_model(model_path);
      std::vector<StanceLabel> labels = model.classes();
      if (!class_name.empty()) labels = {parse_stance(class_name)};
      std::string text;
      for (auto label : labels) {
        const auto csv = format_ranking_csv(top_features(model, label, model.topic(), top_n));
        text += text.empty() ? csv : csv.substr(csv.find('\n') + 1);
      }
      emit(text);
      return 0;
    }
    if (*curve) {
      if (curve_models.size() < 2 || curve_models.size() > 3) throw UsageError("--model must be given 2 or 3 times");
      const auto label = parse_stance(class_name);
      std::vector<RankedFeatures> ranked;
      for (const auto& m : curve_models) {
        const auto model = load_model(m);
        ranked.push_back(top_features(model, label, model.topic(), n_max));
      }
      emit(format_curve_csv(
          topn_overlap_curve(ranked[0], ranked[1], ranked.size() > 2 ? &ranked[2] : nullptr, n_max)));
      return 0;
    }
    if (*consistency) {
      const auto data = join(load_semeval_tsv(tweets), {}, false).dataset;
      const auto scored = read_prediction_file(predictions_path);
      std::map<std::string, StanceLabel> by_id;
      for (std::size_t i = 0; i < scored.ids.size(); ++i) by_id[scored.ids[i]] = scored.pred[i];
      std::vector<StanceLabel> pred;
      for (const auto& inst : data.instances) {
        const auto it = by_id.find(inst.tweet_id);
        if (it == by_id.end()) throw DataError("no prediction for ID " + inst.tweet_id);
        pred.push_back(it->second);
      }
      const auto report = user_consistency(data, pred);
      std::cerr << "authors " << report.authors.size() << ": uniform " << report.uniform << ", polarized+none "
                << report.polarized_plus_none << ", mixed " << report.mixed << "\n";
      emit(format_consistency_csv(report));
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
