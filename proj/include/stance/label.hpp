#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace stance {

// Declaration order is the canonical order used for matrix axes and
// argmax tie-breaking.
enum class StanceLabel : unsigned char { Against = 0, Favor = 1, None = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<StanceLabel, kNumLabels> kCanonicalLabels = {
    StanceLabel::Against, StanceLabel::Favor, StanceLabel::None};

constexpr std::size_t index_of(StanceLabel label) {
  return static_cast<std::size_t>(label);
}

// "Against", "Favor", "None".
std::string_view to_string(StanceLabel label);

// SemEval spelling: "AGAINST", "FAVOR", "NONE".
std::string_view to_semeval(StanceLabel label);

// Case-insensitive and whitespace-trimmed.
// Throws DataError naming the value otherwise.
StanceLabel parse_stance(std::string_view text);

}  // namespace stance
