#include "stance/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <thread>

#include "stance/error.hpp"
#include "text_util.hpp"

namespace stance {

namespace {

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

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string row_name(const FeatureSetSelector& selector, ClassifierMode mode) {
  return std::string(to_string(mode)) + "__" + selector.to_string();
}

std::vector<StanceLabel> labels_of(const Dataset& data) {
  std::vector<StanceLabel> out;
  out.reserve(data.instances.size());
  for (const auto& inst : data.instances) out.push_back(inst.label);
  return out;
}

Dataset pick(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.topics = data.topics;
  out.profiles = data.profiles;
  for (auto i : indices) out.instances.push_back(data.instances[i]);
  return out;
}

void run_parallel(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
}

}  // namespace

std::string slug(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    out += alnum || c == '+' || c == '-' ? c : '_';
  }
  return out.empty() ? "_" : out;
}

LinearModel fit_model(const Dataset& train, const FeatureSetSelector& selector, ClassifierMode mode,
                      const TrainConfig& config, std::size_t min_df, std::string topic) {
  std::vector<FeatureSet> sets;
  sets.reserve(train.instances.size());
  for (const auto& inst : train.instances) sets.push_back(extract_features(inst, train.profile_for(inst), selector));
  auto space = std::make_shared<const FeatureSpace>(build_feature_space(sets, selector, min_df));
  std::vector<SparseBooleanVector> vectors;
  vectors.reserve(sets.size());
  for (const auto& s : sets) vectors.push_back(vectorize(s, *space));
  const auto labels = labels_of(train);
  return train_ovr(vectors, labels, mode, std::move(space), config, std::move(topic));
}

std::vector<StanceLabel> predict_all(const LinearModel& model, const Dataset& data) {
  std::vector<StanceLabel> out;
  out.reserve(data.instances.size());
  for (const auto& inst : data.instances) {
    const auto features = extract_features(inst, data.profile_for(inst), model.selector());
    out.push_back(model.predict(vectorize(features, model.space())));
  }
  return out;
}

std::vector<double> cross_validate(const Dataset& train, const FeatureSetSelector& selector, ClassifierMode mode,
                                   const TrainConfig& config, std::size_t k, std::uint64_t seed, std::size_t min_df) {
  const auto plan = kfold(train.instances.size(), k, seed);
  std::vector<double> scores;
  for (std::size_t f = 0; f < k; ++f) {
    const Dataset fit = pick(train, plan.complement(f));
    const Dataset held = pick(train, plan.fold(f));
    const auto model = fit_model(fit, selector, mode, config, min_df);
    const auto pred = predict_all(model, held);
    const auto gold = labels_of(held);
    std::vector<std::string> topics;
    for (const auto& inst : held.instances) topics.push_back(inst.topic);
    scores.push_back(score_semeval(gold, pred, topics).overall.f_avg);
  }
  return scores;
}

void ExperimentSpec::validate() const {
  if (selectors.empty()) throw ArgumentError("experiment needs at least one selector");
  if (modes.empty()) throw ArgumentError("experiment needs at least one mode");
  if (cv_folds == 1) throw ArgumentError("cross-validation needs at least 2 folds");
  if (top_features == 0 || curve_n_max == 0) throw ArgumentError("top-N sizes must be positive");
  config.validate();
}

ExperimentResult run_experiment(const Dataset& train, const Dataset& test, const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  for (const auto& t : train.topics) {
    if (std::find(test.topics.begin(), test.topics.end(), t) != test.topics.end()) result.topics.push_back(t);
  }
  if (result.topics.empty()) throw DataError("train and test share no topic");

  std::vector<Dataset> train_by_topic;
  std::vector<Dataset> test_by_topic;
  for (const auto& t : result.topics) {
    train_by_topic.push_back(train.subset_topic(t));
    test_by_topic.push_back(test.subset_topic(t));
  }

  for (std::size_t ti = 0; ti < result.topics.size(); ++ti) {
    for (const auto& sel : spec.selectors) {
      for (auto mode : spec.modes) result.cells.push_back(CellResult{result.topics[ti], sel, mode, {}, {}, {}, {}});
    }
  }
  const std::size_t per_topic = spec.selectors.size() * spec.modes.size();

  run_parallel(result.cells.size(), spec.jobs, [&](std::size_t idx) {
    CellResult& cell = result.cells[idx];
    const std::size_t ti = idx / per_topic;
    try {
      auto model = std::make_shared<const LinearModel>(
          fit_model(train_by_topic[ti], cell.selector, cell.mode, spec.config, spec.min_df, cell.topic));
      cell.predictions = predict_all(*model, test_by_topic[ti]);
      if (spec.cv_folds >= 2) {
        cell.cv_scores = cross_validate(train_by_topic[ti], cell.selector, cell.mode, spec.config, spec.cv_folds,
                                        spec.config.seed, spec.min_df);
      }
      cell.model = std::move(model);
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.predictions.clear();
      cell.model.reset();
    }
  });

  for (auto mode : spec.modes) {
    for (const auto& sel : spec.selectors) {
      RowResult row{sel, mode, std::nullopt, {}, false};
      std::vector<StanceLabel> gold;
      std::vector<StanceLabel> pred;
      std::vector<std::string> topics;
      Dataset pooled;
      for (const auto& cell : result.cells) {
        if (!(cell.selector == sel) || cell.mode != mode) continue;
        if (!cell.ok()) {
          row.failed = true;
          continue;
        }
        const auto ti = static_cast<std::size_t>(
            std::find(result.topics.begin(), result.topics.end(), cell.topic) - result.topics.begin());
        const auto& data = test_by_topic[ti];
        for (std::size_t i = 0; i < data.instances.size(); ++i) {
          gold.push_back(data.instances[i].label);
          pred.push_back(cell.predictions[i]);
          topics.push_back(cell.topic);
          pooled.instances.push_back(data.instances[i]);
        }
      }
      if (!gold.empty()) {
        row.report = score_semeval(gold, pred, topics);
        row.consistency = user_consistency(pooled, pred);
      }
      result.rows.push_back(std::move(row));
    }
  }
  for (const auto& cell : result.cells) result.failures += cell.ok() ? 0 : 1;
  return result;
}

std::string format_master_csv(const ExperimentResult& result) {
  std::string out = "mode,selector";
  for (const auto& t : result.topics) out += "," + csv_field(t);
  out += ",F_favor,F_against,F_avg,collapsed\n";
  for (const auto& row : result.rows) {
    out += std::string(to_string(row.mode)) + "," + row.selector.to_string();
    std::string collapsed;
    for (const auto& t : result.topics) {
      const TopicScore* ts = row.report ? row.report->topic(t) : nullptr;
      out += "," + (ts ? fixed4(ts->scores.f_avg) : std::string("ERROR"));
      if (ts) {
        if (auto c = collapsed_class(ts->confusion)) {
          if (!collapsed.empty()) collapsed += ';';
          collapsed += t + ":" + std::string(to_string(*c));
        }
      }
    }
    if (row.report) {
      out += "," + fixed4(row.report->overall.f_favor) + "," + fixed4(row.report->overall.f_against) + "," +
             fixed4(row.report->overall.f_avg);
    } else {
      out += ",ERROR,ERROR,ERROR";
    }
    out += "," + csv_field(collapsed) + "\n";
  }
  return out;
}

void write_experiment(const ExperimentResult& result, const Dataset& train, const Dataset& test,
                      const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  detail::write_file(out_dir / "master.csv", format_master_csv(result));

  // Human-readable tables, one per mode.
  std::string report;
  for (auto mode : spec.modes) {
    report += "== " + std::string(to_string(mode)) + " classifier (F-score %)\n";
    std::string header = "Model";
    std::size_t width = 5;
    for (const auto& sel : spec.selectors) width = std::max(width, sel.to_string().size());
    width += 2;
    header.resize(width, ' ');
    const auto cell = [](std::string s) {
      if (s.size() < 10) s.insert(0, 10 - s.size(), ' ');
      return s + " ";
    };
    for (const auto& t : result.topics) header += cell(t.size() > 10 ? t.substr(0, 10) : t);
    header += "|" + cell("F_favor") + cell("F_against") + cell("F_avg");
    report += header + "\n";
    for (const auto& row : result.rows) {
      if (row.mode != mode) continue;
      std::string line = row.selector.to_string();
      line.resize(width, ' ');
      for (const auto& t : result.topics) {
        const TopicScore* ts = row.report ? row.report->topic(t) : nullptr;
        line += cell(ts ? pct(ts->scores.f_avg) : "ERROR");
      }
      line += "|";
      if (row.report) {
        line += cell(pct(row.report->overall.f_favor)) + cell(pct(row.report->overall.f_against)) +
                cell(pct(row.report->overall.f_avg));
      } else {
        line += cell("ERROR") + cell("ERROR") + cell("ERROR");
      }
      report += line + "\n";
    }
    report += "\n";
  }
  detail::write_file(out_dir / "report.txt", report);

  // Pooled and per-topic confusion matrices.
  for (const auto& row : result.rows) {
    if (!row.report) continue;
    const std::string base = row_name(row.selector, row.mode);
    detail::write_file(out_dir / "confusion" / (base + ".csv"), format_confusion_csv(row.report->confusion));
    for (const auto& t : row.report->per_topic) {
      detail::write_file(out_dir / "confusion" / (base + "__" + slug(t.topic) + ".csv"),
                         format_confusion_csv(t.confusion));
    }
  }

  // Significance of each row against the first selector of its mode, paired by topic.
  std::string sig = "mode,selector,baseline,t_p_value,u_p_value\n";
  for (auto mode : spec.modes) {
    const RowResult* base = nullptr;
    for (const auto& row : result.rows) {
      if (row.mode != mode || !row.report) continue;
      if (!base) {
        base = &row;
        continue;
      }
      std::vector<double> a;
      std::vector<double> b;
      for (const auto& t : result.topics) {
        const auto* ta = row.report->topic(t);
        const auto* tb = base->report->topic(t);
        if (ta && tb) {
          a.push_back(ta->scores.f_avg);
          b.push_back(tb->scores.f_avg);
        }
      }
      std::string tp = "NA";
      std::string up = "NA";
      try {
        tp = fixed4(paired_t_test(a, b).p_value);
      } catch (const ArgumentError&) {
      }
      try {
        up = fixed4(mann_whitney_u(a, b).p_value);
      } catch (const ArgumentError&) {
      }
      sig += std::string(to_string(mode)) + "," + row.selector.to_string() + "," + base->selector.to_string() + "," +
             tp + "," + up + "\n";
    }
  }
  detail::write_file(out_dir / "significance.csv", sig);

  if (spec.cv_folds >= 2) {
    std::string cv = "mode,selector,topic,fold,F_avg\n";
    for (const auto& cell : result.cells) {
      for (std::size_t f = 0; f < cell.cv_scores.size(); ++f) {
        cv += std::string(to_string(cell.mode)) + "," + cell.selector.to_string() + "," + csv_field(cell.topic) + "," +
              std::to_string(f) + "," + fixed4(cell.cv_scores[f]) + "\n";
      }
    }
    detail::write_file(out_dir / "cv.csv", cv);
  }

  const fs::path analysis = out_dir / "analysis";
  fs::create_directories(analysis);

  // Network overlap over every profiled user of the corpus.
  ProfileMap profiles = train.profiles;
  for (const auto& [id, p] : test.profiles) profiles.emplace(id, p);
  if (!profiles.empty()) {
    const std::pair<ProfileField, ProfileField> pairs[] = {
        {ProfileField::InMentions, ProfileField::PnMentions},
        {ProfileField::InMentions, ProfileField::CnFriends},
        {ProfileField::PnMentions, ProfileField::CnFriends},
        {ProfileField::InDomains, ProfileField::PnDomains},
    };
    std::string values = "user_id,pair,jaccard\n";
    for (const auto& [a, b] : pairs) {
      const auto dist = network_overlap(profiles, a, b, spec.bin_width);
      detail::write_file(analysis / ("overlap__" + std::string(to_string(a)) + "__" + std::string(to_string(b)) + ".csv"),
                         format_histogram_csv(dist));
      for (std::size_t i = 0; i < dist.values.size(); ++i) {
        values += csv_field(dist.users[i]) + "," + dist.pair_name + "," + fixed4(dist.values[i]) + "\n";
      }
    }
    detail::write_file(analysis / "overlap_values.csv", values);
  }

  // Top features per class and topic for every successful cell.
  for (const auto& row : result.rows) {
    std::string rankings = "rank,feature,weight,class,topic\n";
    for (const auto& cell : result.cells) {
      if (!(cell.selector == row.selector) || cell.mode != row.mode || !cell.model) continue;
      for (auto label : cell.model->classes()) {
        const auto ranked = top_features(*cell.model, label, cell.topic, spec.top_features);
        const auto csv = format_ranking_csv(ranked);
        rankings += csv.substr(csv.find('\n') + 1);
      }
    }
    detail::write_file(analysis / ("top_features__" + row_name(row.selector, row.mode) + ".csv"), rankings);
  }

  // Top-N overlap curves between the first three network-only selectors.
  std::vector<FeatureSetSelector> network;
  for (const auto& sel : spec.selectors) {
    if (sel.network_only() && network.size() < 3) network.push_back(sel);
  }
  if (network.size() >= 2) {
    for (auto mode : spec.modes) {
      for (const auto& topic : result.topics) {
        std::vector<const CellResult*> cells;
        for (const auto& sel : network) {
          for (const auto& cell : result.cells) {
            if (cell.topic == topic && cell.mode == mode && cell.selector == sel && cell.model) cells.push_back(&cell);
          }
        }
        if (cells.size() < 2) continue;
        for (auto label : {StanceLabel::Favor, StanceLabel::Against}) {
          std::vector<RankedFeatures> ranked;
          for (const auto* cell : cells) ranked.push_back(top_features(*cell->model, label, topic, spec.curve_n_max));
          const auto curve = topn_overlap_curve(ranked[0], ranked[1], ranked.size() > 2 ? &ranked[2] : nullptr,
                                                spec.curve_n_max);
          detail::write_file(analysis / "curves" /
                                 (std::string(to_string(mode)) + "__" + slug(topic) + "__" +
                                  std::string(to_string(label)) + ".csv"),
                             format_curve_csv(curve));
        }
      }
    }
  }

  std::string consistency = "mode,selector,authors,uniform,polarized_plus_none,mixed,uniform_fraction\n";
  for (const auto& row : result.rows) {
    const auto& c = row.consistency;
    consistency += std::string(to_string(row.mode)) + "," + row.selector.to_string() + "," +
                   std::to_string(c.authors.size()) + "," + std::to_string(c.uniform) + "," +
                   std::to_string(c.polarized_plus_none) + "," + std::to_string(c.mixed) + "," +
                   fixed4(c.uniform_fraction()) + "\n";
  }
  detail::write_file(analysis / "consistency.csv", consistency);

  const fs::path failures = out_dir / "failures.txt";
  if (result.failures > 0) {
    std::string text;
    for (const auto& cell : result.cells) {
      if (!cell.ok()) {
        text += std::string(to_string(cell.mode)) + "\t" + cell.selector.to_string() + "\t" + cell.topic + "\t" +
                cell.error + "\n";
      }
    }
    detail::write_file(failures, text);
  } else {
    fs::remove(failures);
  }
}

}  // namespace stance
