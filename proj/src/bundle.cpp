#include "stance/bundle.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "stance/error.hpp"
#include "text_util.hpp"

namespace stance {

namespace {

constexpr std::string_view kFormat = "stance-bundle-1";

std::filesystem::path weight_file(const std::filesystem::path& dir, StanceLabel label) {
  return dir / ("weights_" + std::string(to_string(label)) + ".tsv");
}

std::string format_weights(const std::vector<double>& w, double bias) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    out += std::to_string(i);
    out += '\t';
    out += detail::format_double(w[i]);
    out += '\n';
  }
  out += "bias\t";
  out += detail::format_double(bias);
  out += '\n';
  return out;
}

std::pair<std::vector<double>, double> parse_weights(std::string_view content, std::size_t dim,
                                                     const std::filesystem::path& path) {
  std::vector<double> w(dim, 0.0);
  bool has_bias = false;
  double bias = 0.0;
  const auto rows = detail::lines(content);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) continue;
    const auto fields = detail::split(rows[r], '\t');
    const auto where = path.string() + " line " + std::to_string(r + 1);
    if (fields.size() != 2) throw DataError(where + ": expected two fields");
    if (fields[0] == "bias") {
      bias = detail::parse_double(fields[1]);
      has_bias = true;
      continue;
    }
    std::size_t idx = 0;
    const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), idx);
    if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size() || idx >= dim) {
      throw DataError(where + ": bad column index '" + std::string(fields[0]) + "'");
    }
    w[idx] = detail::parse_double(fields[1]);
  }
  if (!has_bias) throw DataError(path.string() + ": missing bias line");
  return {std::move(w), bias};
}

std::map<std::string, std::string> parse_metadata(std::string_view content) {
  std::map<std::string, std::string> meta;
  for (auto row : detail::lines(content)) {
    if (row.empty() || row.front() == '#') continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) throw DataError("metadata line without '=': " + std::string(row));
    meta[std::string(detail::trim(row.substr(0, eq)))] = std::string(detail::trim(row.substr(eq + 1)));
  }
  return meta;
}

}  // namespace

void save_model(const LinearModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& cfg = model.config();
  std::string meta;
  meta += "format=" + std::string(kFormat) + "\n";
  meta += "mode=" + std::string(to_string(model.mode())) + "\n";
  meta += "selector=" + model.selector().to_string() + "\n";
  meta += "topic=" + model.topic() + "\n";
  std::string classes;
  for (auto c : model.classes()) {
    if (!classes.empty()) classes += ',';
    classes += to_string(c);
  }
  meta += "classes=" + classes + "\n";
  meta += "features=" + std::to_string(model.space().size()) + "\n";
  meta += "C=" + detail::format_double(cfg.C) + "\n";
  meta += "tol=" + detail::format_double(cfg.tol) + "\n";
  meta += "max_iter=" + std::to_string(cfg.max_iter) + "\n";
  meta += "seed=" + std::to_string(cfg.seed) + "\n";
  meta += "loss=" + std::string(to_string(cfg.loss)) + "\n";
  detail::write_file(dir / "metadata.txt", meta);
  detail::write_file(dir / "space.tsv", model.space().serialize());

  if (model.mode() == ClassifierMode::Binary) {
    detail::write_file(weight_file(dir, StanceLabel::Favor),
                       format_weights(model.raw_weights()[0], model.raw_biases()[0]));
  } else {
    for (auto c : kCanonicalLabels) {
      detail::write_file(weight_file(dir, c),
                         format_weights(model.raw_weights()[index_of(c)], model.raw_biases()[index_of(c)]));
    }
  }
}

LinearModel load_model(const std::filesystem::path& dir) {
  if (!is_bundle(dir)) throw DataError("'" + dir.string() + "' is not a model bundle");
  auto meta = parse_metadata(detail::read_file(dir / "metadata.txt"));
  const auto get = [&](const std::string& key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw DataError(dir.string() + ": metadata lacks '" + key + "'");
    return it->second;
  };
  if (get("format") != kFormat) throw DataError(dir.string() + ": unsupported bundle format '" + get("format") + "'");

  try {
    const auto mode = parse_mode(get("mode"));
    const auto selector = FeatureSetSelector::parse(get("selector"));
    TrainConfig cfg;
    cfg.C = detail::parse_double(get("C"));
    cfg.tol = detail::parse_double(get("tol"));
    cfg.max_iter = std::stoi(get("max_iter"));
    cfg.seed = std::stoull(get("seed"));
    cfg.loss = parse_loss(get("loss"));

    auto space = std::make_shared<const FeatureSpace>(
        FeatureSpace::deserialize(detail::read_file(dir / "space.tsv"), selector));
    if (std::to_string(space->size()) != get("features")) {
      throw DataError(dir.string() + ": space.tsv size disagrees with metadata");
    }

    std::vector<std::vector<double>> weights;
    std::vector<double> biases;
    const std::vector<StanceLabel> stored =
        mode == ClassifierMode::Binary ? std::vector<StanceLabel>{StanceLabel::Favor}
                                       : std::vector<StanceLabel>(kCanonicalLabels.begin(), kCanonicalLabels.end());
    for (auto c : stored) {
      const auto path = weight_file(dir, c);
      auto [w, b] = parse_weights(detail::read_file(path), space->size(), path);
      weights.push_back(std::move(w));
      biases.push_back(b);
    }
    return LinearModel(mode, std::move(space), std::move(weights), std::move(biases), cfg, get("topic"));
  } catch (const ArgumentError& e) {
    throw DataError(dir.string() + ": " + e.what());
  } catch (const std::logic_error& e) {  // stoi / stoull
    throw DataError(dir.string() + ": bad metadata value (" + e.what() + ")");
  }
}

bool is_bundle(const std::filesystem::path& dir) {
  return std::filesystem::is_regular_file(dir / "metadata.txt") && std::filesystem::is_regular_file(dir / "space.tsv");
}

std::vector<std::filesystem::path> find_bundles(const std::filesystem::path& path) {
  if (is_bundle(path)) return {path};
  std::vector<std::filesystem::path> out;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_directory() && is_bundle(entry.path())) out.push_back(entry.path());
    }
  }
  if (out.empty()) throw DataError("no model bundle found at '" + path.string() + "'");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stance
