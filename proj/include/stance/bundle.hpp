#pragma once

#include <filesystem>
#include <vector>

#include "stance/linsvm.hpp"

namespace stance {

// A model bundle is a directory holding
//   metadata.txt      key=value lines (format, mode, selector, topic, classes, config)
//   space.tsv         feature<TAB>index
//   weights_<Class>.tsv  index<TAB>weight for non-zero weights, then bias<TAB>value
// Ternary bundles carry Against, Favor and None weight files; binary bundles
// carry only the Favor margin (Against is its negation). Numbers are written
// in shortest round-trip form, so loading reproduces scores bit for bit.
void save_model(const LinearModel& model, const std::filesystem::path& dir);
LinearModel load_model(const std::filesystem::path& dir);

bool is_bundle(const std::filesystem::path& dir);

// A bundle directory itself, or the bundles directly under a directory
// (sorted by name). Throws DataError when nothing is found.
std::vector<std::filesystem::path> find_bundles(const std::filesystem::path& path);

}  // namespace stance
