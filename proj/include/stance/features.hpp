#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stance/corpus.hpp"

namespace stance {

enum class FeatureFamily : unsigned { Txt, InAt, InDm, PnAt, PnDm, CnFr, CnFl };

inline constexpr std::size_t kNumFamilies = 7;

std::string_view family_name(FeatureFamily family);    // "TXT", "IN_AT", ...
std::string_view family_prefix(FeatureFamily family);  // "inat:"; TXT has two, see extract_features

// Non-empty set of feature families.
class FeatureSetSelector {
 public:
  FeatureSetSelector(std::initializer_list<FeatureFamily> families);

  // "+"-separated family names in any order. Also accepts the group names
  // IN, PN and CN for both families of that network. Throws ArgumentError.
  static FeatureSetSelector parse(std::string_view text);

  bool has(FeatureFamily family) const { return (bits_ >> static_cast<unsigned>(family)) & 1U; }
  bool network_only() const { return !has(FeatureFamily::Txt); }
  std::vector<FeatureFamily> families() const;

  // Sorted family names joined by "+", e.g. "IN_AT+IN_DM+TXT".
  std::string to_string() const;

  bool operator==(const FeatureSetSelector&) const = default;

 private:
  explicit FeatureSetSelector(unsigned bits);
  unsigned bits_ = 0;
};

using FeatureSet = std::set<std::string>;

// Lowercase, split on Unicode whitespace, strip surrounding punctuation
// (a leading '@' or '#' survives), replace http(s) URLs with "<url>".
std::vector<std::string> tokenize(std::string_view text);

FeatureSet word_ngrams(std::span<const std::string> tokens, std::span<const int> orders);
FeatureSet word_ngrams(std::span<const std::string> tokens, std::initializer_list<int> orders);

// Windows over code points of the lowercased text, spaces included.
FeatureSet char_ngrams(std::string_view text, std::span<const int> orders);
FeatureSet char_ngrams(std::string_view text, std::initializer_list<int> orders);

// Unicode-aware lowercasing for ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Invalid UTF-8 bytes are passed through as U+FFFD.
std::string lowercase(std::string_view text);

inline constexpr std::string_view kWordPrefix = "txtw:";
inline constexpr std::string_view kCharPrefix = "txtc:";

FeatureSet extract_features(const LabeledInstance& instance, const UserNetworkProfile& profile,
                            const FeatureSetSelector& selector);

// Namespaced feature string minus its family prefix.
std::string_view strip_namespace(std::string_view feature);

struct SparseBooleanVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::size_t dimension = 0;

  bool operator==(const SparseBooleanVector&) const = default;
};

// Column index of each training feature. Columns are in lexicographic order
// of the feature strings, so the index of a feature is its rank.
class FeatureSpace {
 public:
  FeatureSpace(std::vector<std::string> sorted_unique_features, FeatureSetSelector selector);

  std::size_t size() const { return features_.size(); }
  const FeatureSetSelector& selector() const { return selector_; }
  const std::string& feature(std::size_t index) const { return features_.at(index); }
  const std::vector<std::string>& features() const { return features_; }

  // -1 when the feature is not in the space.
  std::int64_t index_of(std::string_view feature) const;

  // "feature<TAB>index" lines. Backslash, tab, CR and LF in feature strings
  // are written as \\, \t, \r and \n.
  std::string serialize() const;
  static FeatureSpace deserialize(std::string_view content, FeatureSetSelector selector);

  bool operator==(const FeatureSpace&) const = default;

 private:
  std::vector<std::string> features_;
  FeatureSetSelector selector_;
};

// Keeps features present in at least min_df of the sets. Throws DataError
// "empty feature space" when nothing survives.
FeatureSpace build_feature_space(std::span<const FeatureSet> train_sets, const FeatureSetSelector& selector,
                                 std::size_t min_df = 1);

// Features outside the space are dropped.
SparseBooleanVector vectorize(const FeatureSet& features, const FeatureSpace& space);

}  // namespace stance
