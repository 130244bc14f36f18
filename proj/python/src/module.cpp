#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stance/analysis.hpp"
#include "stance/bundle.hpp"
#include "stance/corpus.hpp"
#include "stance/error.hpp"
#include "stance/eval.hpp"
#include "stance/experiment.hpp"
#include "stance/features.hpp"
#include "stance/linsvm.hpp"
#include "stance/synth.hpp"

namespace py = pybind11;
using namespace stance;

namespace {

std::vector<std::vector<std::size_t>> matrix_rows(const ConfusionMatrix& m) {
  std::vector<std::vector<std::size_t>> rows;
  for (const auto& r : m) rows.emplace_back(r.begin(), r.end());
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stance detection from text and social-network features";

  auto base = py::register_exception<Error>(m, "StanceError", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());

  py::enum_<StanceLabel>(m, "StanceLabel")
      .value("AGAINST", StanceLabel::Against)
      .value("FAVOR", StanceLabel::Favor)
      .value("NONE", StanceLabel::None);
  m.def("parse_stance", &parse_stance);
  m.def("label_name", [](StanceLabel l) { return std::string(to_string(l)); });

  // corpus
  py::class_<LabeledInstance>(m, "LabeledInstance")
      .def(py::init<>())
      .def(py::init([](std::string id, std::string author, std::string topic, std::string text, StanceLabel label) {
             return LabeledInstance{std::move(id), std::move(author), std::move(topic), std::move(text), label};
           }),
           py::arg("tweet_id"), py::arg("author_id"), py::arg("topic"), py::arg("text"), py::arg("label"))
      .def_readwrite("tweet_id", &LabeledInstance::tweet_id)
      .def_readwrite("author_id", &LabeledInstance::author_id)
      .def_readwrite("topic", &LabeledInstance::topic)
      .def_readwrite("text", &LabeledInstance::text)
      .def_readwrite("label", &LabeledInstance::label)
      .def("__eq__", [](const LabeledInstance& a, const LabeledInstance& b) { return a == b; });

  py::class_<UserNetworkProfile>(m, "UserNetworkProfile")
      .def(py::init<>())
      .def_readwrite("user_id", &UserNetworkProfile::user_id)
      .def_readwrite("in_mentions", &UserNetworkProfile::in_mentions)
      .def_readwrite("in_domains", &UserNetworkProfile::in_domains)
      .def_readwrite("pn_mentions", &UserNetworkProfile::pn_mentions)
      .def_readwrite("pn_domains", &UserNetworkProfile::pn_domains)
      .def_readwrite("cn_friends", &UserNetworkProfile::cn_friends)
      .def_readwrite("cn_followers", &UserNetworkProfile::cn_followers);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("instances", &Dataset::instances)
      .def_readwrite("profiles", &Dataset::profiles)
      .def_readwrite("topics", &Dataset::topics)
      .def("subset_topic", &Dataset::subset_topic)
      .def("__len__", [](const Dataset& d) { return d.instances.size(); });

  m.def("load_semeval_tsv", &load_semeval_tsv, py::arg("path"));
  m.def("parse_semeval_tsv", &parse_semeval_tsv, py::arg("content"));
  m.def("format_semeval_tsv", &format_semeval_tsv);
  m.def(
      "load_network_profiles",
      [](const std::filesystem::path& path) {
        auto r = load_network_profiles(path);
        return py::make_tuple(r.profiles, r.duplicate_user_ids);
      },
      py::arg("path"), "Returns (profiles by user id, duplicate user_id count).");
  m.def("normalize_account", &normalize_account);
  m.def("normalize_domain", &normalize_domain);
  m.def(
      "join",
      [](std::vector<LabeledInstance> instances, const ProfileMap& profiles, bool require_profile) {
        auto r = join(std::move(instances), profiles, require_profile);
        return py::make_tuple(std::move(r.dataset), r.dropped);
      },
      py::arg("instances"), py::arg("profiles"), py::arg("require_profile") = false,
      "Returns (dataset, dropped instance count).");

  // features
  py::class_<FeatureSetSelector>(m, "FeatureSetSelector")
      .def(py::init([](std::string_view text) { return FeatureSetSelector::parse(text); }))
      .def("network_only", &FeatureSetSelector::network_only)
      .def("__str__", &FeatureSetSelector::to_string)
      .def("__repr__", [](const FeatureSetSelector& s) { return "FeatureSetSelector('" + s.to_string() + "')"; })
      .def("__eq__", [](const FeatureSetSelector& a, const FeatureSetSelector& b) { return a == b; });

  py::class_<SparseBooleanVector>(m, "SparseBooleanVector")
      .def(py::init([](std::vector<std::uint32_t> indices, std::size_t dimension) {
             return SparseBooleanVector{std::move(indices), dimension};
           }),
           py::arg("indices"), py::arg("dimension"))
      .def_readonly("indices", &SparseBooleanVector::indices)
      .def_readonly("dimension", &SparseBooleanVector::dimension);

  py::class_<FeatureSpace, std::shared_ptr<FeatureSpace>>(m, "FeatureSpace")
      .def("__len__", &FeatureSpace::size)
      .def("index_of", &FeatureSpace::index_of)
      .def("feature", &FeatureSpace::feature)
      .def_property_readonly("features", &FeatureSpace::features)
      .def_property_readonly("selector", &FeatureSpace::selector);

  m.def("tokenize", &tokenize);
  m.def("word_ngrams", [](const std::vector<std::string>& tokens, const std::vector<int>& orders) {
    return word_ngrams(tokens, std::span<const int>(orders));
  });
  m.def("char_ngrams", [](std::string_view text, const std::vector<int>& orders) {
    return char_ngrams(text, std::span<const int>(orders));
  });
  m.def("extract_features", &extract_features, py::arg("instance"), py::arg("profile"), py::arg("selector"));
  m.def(
      "build_feature_space",
      [](const std::vector<FeatureSet>& sets, const FeatureSetSelector& selector, std::size_t min_df) {
        return std::make_shared<FeatureSpace>(build_feature_space(sets, selector, min_df));
      },
      py::arg("feature_sets"), py::arg("selector"), py::arg("min_df") = 1);
  m.def("vectorize", &vectorize, py::arg("features"), py::arg("space"));

  // linsvm
  py::enum_<ClassifierMode>(m, "ClassifierMode")
      .value("Ternary", ClassifierMode::Ternary)
      .value("Binary", ClassifierMode::Binary);
  py::enum_<Loss>(m, "Loss").value("Hinge", Loss::Hinge).value("SquaredHinge", Loss::SquaredHinge);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("C", &TrainConfig::C)
      .def_readwrite("tol", &TrainConfig::tol)
      .def_readwrite("max_iter", &TrainConfig::max_iter)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("loss", &TrainConfig::loss);

  py::class_<BinaryModel>(m, "BinaryModel")
      .def_readonly("weights", &BinaryModel::weights)
      .def_readonly("bias", &BinaryModel::bias)
      .def_readonly("alpha", &BinaryModel::alpha)
      .def_readonly("dual_objective", &BinaryModel::dual_objective)
      .def_readonly("primal_objective", &BinaryModel::primal_objective)
      .def_readonly("epochs", &BinaryModel::epochs)
      .def_readonly("converged", &BinaryModel::converged)
      .def("decision", &BinaryModel::decision);
  m.def(
      "train_binary",
      [](const std::vector<SparseBooleanVector>& xs, const std::vector<int>& ys, const TrainConfig& cfg) {
        return train_binary(xs, ys, cfg);
      },
      py::arg("vectors"), py::arg("labels"), py::arg("config") = TrainConfig{});

  py::class_<LinearModel>(m, "LinearModel")
      .def_property_readonly("mode", &LinearModel::mode)
      .def_property_readonly("classes", &LinearModel::classes)
      .def_property_readonly("topic", &LinearModel::topic)
      .def_property_readonly("selector", &LinearModel::selector)
      .def_property_readonly("space",
                             [](const LinearModel& lm) { return std::const_pointer_cast<FeatureSpace>(lm.space_ptr()); })
      .def("decision_values", &LinearModel::decision_values)
      .def("predict", &LinearModel::predict)
      .def("class_weights", &LinearModel::class_weights);

  m.def("fit_model", &fit_model, py::arg("train"), py::arg("selector"), py::arg("mode"),
        py::arg("config") = TrainConfig{}, py::arg("min_df") = 1, py::arg("topic") = std::string{},
        py::call_guard<py::gil_scoped_release>());
  m.def("predict_all", &predict_all, py::arg("model"), py::arg("data"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("dir"));
  m.def("load_model", &load_model, py::arg("dir"));

  // eval
  py::class_<FScores>(m, "FScores")
      .def_readonly("f_favor", &FScores::f_favor)
      .def_readonly("f_against", &FScores::f_against)
      .def_readonly("f_avg", &FScores::f_avg);
  py::class_<TopicScore>(m, "TopicScore")
      .def_readonly("topic", &TopicScore::topic)
      .def_readonly("scores", &TopicScore::scores)
      .def_readonly("count", &TopicScore::count)
      .def_property_readonly("confusion", [](const TopicScore& t) { return matrix_rows(t.confusion); });
  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("per_topic", &EvalReport::per_topic)
      .def_readonly("overall", &EvalReport::overall)
      .def_readonly("count", &EvalReport::count)
      .def_property_readonly("confusion", [](const EvalReport& r) { return matrix_rows(r.confusion); })
      .def("csv", [](const EvalReport& r) { return format_report_csv(r); })
      .def("table", [](const EvalReport& r, std::string_view name) { return format_report_table(r, name); },
           py::arg("model_name") = "model");
  m.def(
      "score_semeval",
      [](const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred,
         const std::vector<std::string>& topics) { return score_semeval(gold, pred, topics); },
      py::arg("gold"), py::arg("pred"), py::arg("topics"));

  py::class_<TTestResult>(m, "TTestResult")
      .def_readonly("t", &TTestResult::t)
      .def_readonly("dof", &TTestResult::dof)
      .def_readonly("p_value", &TTestResult::p_value);
  py::class_<MannWhitneyResult>(m, "MannWhitneyResult")
      .def_readonly("u", &MannWhitneyResult::u)
      .def_readonly("p_value", &MannWhitneyResult::p_value)
      .def_readonly("exact", &MannWhitneyResult::exact);
  m.def("paired_t_test", [](const std::vector<double>& a, const std::vector<double>& b) { return paired_t_test(a, b); });
  m.def("mann_whitney_u",
        [](const std::vector<double>& a, const std::vector<double>& b) { return mann_whitney_u(a, b); });
  m.def(
      "kfold", [](std::size_t n, std::size_t k, std::uint64_t seed) { return kfold(n, k, seed).assignments; },
      py::arg("n"), py::arg("k"), py::arg("seed"), "Fold index of each of n items.");

  // analysis
  m.def(
      "jaccard", [](const std::set<std::string>& a, const std::set<std::string>& b) { return jaccard(a, b); });
  m.def(
      "network_overlap",
      [](const ProfileMap& profiles, std::string_view first, std::string_view second, double bin_width) {
        const auto d = network_overlap(profiles, first, second, bin_width);
        return py::dict(py::arg("pair") = d.pair_name, py::arg("users") = d.users, py::arg("values") = d.values,
                        py::arg("excluded") = d.excluded, py::arg("mean") = d.mean());
      },
      py::arg("profiles"), py::arg("first"), py::arg("second"), py::arg("bin_width") = 5.0);
  m.def(
      "top_features",
      [](const LinearModel& model, StanceLabel label, std::size_t n) {
        return top_features(model, label, model.topic(), n).entries;
      },
      py::arg("model"), py::arg("label"), py::arg("n") = 20);
  m.def(
      "user_consistency",
      [](const Dataset& data, const std::vector<StanceLabel>& pred) {
        const auto r = user_consistency(data, pred);
        return py::dict(py::arg("authors") = r.authors.size(), py::arg("uniform") = r.uniform,
                        py::arg("polarized_plus_none") = r.polarized_plus_none, py::arg("mixed") = r.mixed);
      },
      py::arg("data"), py::arg("predictions"));

  // synth
  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("topics", &SynthConfig::topics)
      .def_readwrite("users_per_topic", &SynthConfig::users_per_topic)
      .def_readwrite("tweets_per_user", &SynthConfig::tweets_per_user)
      .def_readwrite("stance_prior", &SynthConfig::stance_prior, "Per topic [against, favor, none] weights.")
      .def_readwrite("homophily", &SynthConfig::homophily)
      .def_readwrite("text_signal", &SynthConfig::text_signal)
      .def_readwrite("silent_fraction", &SynthConfig::silent_fraction)
      .def_readwrite("train_fraction", &SynthConfig::train_fraction)
      .def_readwrite("seed", &SynthConfig::seed);
  py::class_<GroundTruth>(m, "GroundTruth")
      .def_readonly("user_id", &GroundTruth::user_id)
      .def_readonly("topic", &GroundTruth::topic)
      .def_readonly("latent_stance", &GroundTruth::latent_stance)
      .def_readonly("silent", &GroundTruth::silent);
  py::class_<SynthCorpus>(m, "SynthCorpus")
      .def_readonly("train", &SynthCorpus::train)
      .def_readonly("test", &SynthCorpus::test)
      .def_readonly("truth", &SynthCorpus::truth);
  m.def("generate", &generate, py::arg("config"));
  m.def("write_corpus", &write_corpus, py::arg("corpus"), py::arg("dir"));

  // experiment
  m.def(
      "run_experiment",
      [](const Dataset& train, const Dataset& test, const std::vector<std::string>& selectors,
         const std::vector<ClassifierMode>& modes, const TrainConfig& config, std::size_t jobs,
         const std::optional<std::filesystem::path>& out_dir) {
        ExperimentSpec spec;
        for (const auto& s : selectors) spec.selectors.push_back(FeatureSetSelector::parse(s));
        spec.modes = modes;
        spec.config = config;
        spec.jobs = jobs;
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(train, test, spec);
          if (out_dir) write_experiment(result, train, test, spec, *out_dir);
        }
        return py::make_tuple(format_master_csv(result), result.failures);
      },
      py::arg("train"), py::arg("test"), py::arg("selectors"),
      py::arg("modes") = std::vector<ClassifierMode>{ClassifierMode::Ternary, ClassifierMode::Binary},
      py::arg("config") = TrainConfig{}, py::arg("jobs") = 1, py::arg("out_dir") = py::none(),
      "Returns (master CSV text, failed cell count).");
}
