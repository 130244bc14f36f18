#include "stance/features.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "stance/error.hpp"
#include "text_util.hpp"

namespace stance {

namespace {

struct FamilyInfo {
  FeatureFamily family;
  std::string_view name;
  std::string_view prefix;
  ProfileField field;  // unused for TXT
};

constexpr std::array<FamilyInfo, kNumFamilies> kFamilies = {{
    {FeatureFamily::Txt, "TXT", "txt:", ProfileField::InMentions},
    {FeatureFamily::InAt, "IN_AT", "inat:", ProfileField::InMentions},
    {FeatureFamily::InDm, "IN_DM", "indm:", ProfileField::InDomains},
    {FeatureFamily::PnAt, "PN_AT", "pnat:", ProfileField::PnMentions},
    {FeatureFamily::PnDm, "PN_DM", "pndm:", ProfileField::PnDomains},
    {FeatureFamily::CnFr, "CN_FR", "cnfr:", ProfileField::CnFriends},
    {FeatureFamily::CnFl, "CN_FL", "cnfl:", ProfileField::CnFollowers},
}};

constexpr std::array<int, 3> kWordOrders = {1, 2, 3};
constexpr std::array<int, 4> kCharOrders = {2, 3, 4, 5};

constexpr char32_t kReplacement = 0xFFFD;

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string encode_utf8(std::span<const char32_t> cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0xC0) return c;
  if ((c >= 0xC0 && c <= 0xDE) && c != 0xD7) return c + 32;            // Latin-1
  if (c >= 0x100 && c <= 0x17F) {                                        // Latin Extended-A
    if (c == 0x130) return U'i';
    if (c == 0x178) return 0xFF;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
    if (c == 0x138 || c == 0x149 || c == 0x17F) return c;
    return (c % 2 == 0) ? c + 1 : c;
  }
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;            // Greek
  if (c >= 0x410 && c <= 0x42F) return c + 32;                           // Cyrillic
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

bool is_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
         c == 0x3000;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  return (c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7 || (c >= 0x2010 && c <= 0x2027) ||
         (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0xFF01 && c <= 0xFF0F) || c == kReplacement;
}

bool starts_with(std::span<const char32_t> s, std::u32string_view prefix) {
  return s.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), s.begin());
}

void check_orders(std::span<const int> orders) {
  if (orders.empty()) throw ArgumentError("n-gram orders must be non-empty");
  for (int n : orders) {
    if (n < 1) throw ArgumentError("n-gram order must be >= 1");
  }
}

const FamilyInfo& info(FeatureFamily family) { return kFamilies[static_cast<unsigned>(family)]; }

}  // namespace

std::string_view family_name(FeatureFamily family) { return info(family).name; }
std::string_view family_prefix(FeatureFamily family) { return info(family).prefix; }

FeatureSetSelector::FeatureSetSelector(unsigned bits) : bits_(bits) {
  if (bits_ == 0) throw ArgumentError("feature selector needs at least one family");
}

FeatureSetSelector::FeatureSetSelector(std::initializer_list<FeatureFamily> families) {
  for (auto f : families) bits_ |= 1U << static_cast<unsigned>(f);
  if (bits_ == 0) throw ArgumentError("feature selector needs at least one family");
}

FeatureSetSelector FeatureSetSelector::parse(std::string_view text) {
  unsigned bits = 0;
  for (auto part : detail::split(text, '+')) {
    std::string name = detail::ascii_lower(detail::trim(part));
    if (name == "in_@") name = "in_at";
    if (name == "pn_@") name = "pn_at";
    const auto bit = [](FeatureFamily f) { return 1U << static_cast<unsigned>(f); };
    if (name == "in") {
      bits |= bit(FeatureFamily::InAt) | bit(FeatureFamily::InDm);
    } else if (name == "pn") {
      bits |= bit(FeatureFamily::PnAt) | bit(FeatureFamily::PnDm);
    } else if (name == "cn") {
      bits |= bit(FeatureFamily::CnFr) | bit(FeatureFamily::CnFl);
    } else {
      bool found = false;
      for (const auto& fam : kFamilies) {
        if (name == detail::ascii_lower(fam.name)) {
          bits |= bit(fam.family);
          found = true;
        }
      }
      if (!found) throw ArgumentError("unknown feature family '" + std::string(detail::trim(part)) + "'");
    }
  }
  return FeatureSetSelector(bits);
}

std::vector<FeatureFamily> FeatureSetSelector::families() const {
  std::vector<FeatureFamily> out;
  for (const auto& fam : kFamilies) {
    if (has(fam.family)) out.push_back(fam.family);
  }
  return out;
}

std::string FeatureSetSelector::to_string() const {
  std::vector<std::string_view> names;
  for (auto f : families()) names.push_back(family_name(f));
  std::sort(names.begin(), names.end());
  std::string out;
  for (auto n : names) {
    if (!out.empty()) out += '+';
    out += n;
  }
  return out;
}

std::string lowercase(std::string_view text) {
  auto cps = decode_utf8(text);
  for (auto& c : cps) c = to_lower(c);
  return encode_utf8(cps);
}

std::vector<std::string> tokenize(std::string_view text) {
  auto cps = decode_utf8(text);
  for (auto& c : cps) c = to_lower(c);

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    std::size_t end = i;
    while (end < cps.size() && !is_space(cps[end])) ++end;
    std::span<const char32_t> tok(cps.data() + i, end - i);
    i = end;

    while (!tok.empty() && is_punct(tok.front()) && tok.front() != U'@' && tok.front() != U'#') {
      tok = tok.subspan(1);
    }
    if (starts_with(tok, U"http://") || starts_with(tok, U"https://")) {
      tokens.emplace_back("<url>");
      continue;
    }
    while (!tok.empty() && is_punct(tok.back())) tok = tok.first(tok.size() - 1);
    if (!tok.empty()) tokens.push_back(encode_utf8(tok));
  }
  return tokens;
}

FeatureSet word_ngrams(std::span<const std::string> tokens, std::span<const int> orders) {
  check_orders(orders);
  FeatureSet out;
  for (int order : orders) {
    const auto n = static_cast<std::size_t>(order);
    for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
      std::string gram = tokens[start];
      for (std::size_t k = 1; k < n; ++k) {
        gram += ' ';
        gram += tokens[start + k];
      }
      out.insert(std::move(gram));
    }
  }
  return out;
}

FeatureSet word_ngrams(std::span<const std::string> tokens, std::initializer_list<int> orders) {
  return word_ngrams(tokens, std::span<const int>(orders.begin(), orders.size()));
}

FeatureSet char_ngrams(std::string_view text, std::span<const int> orders) {
  check_orders(orders);
  auto cps = decode_utf8(text);
  for (auto& c : cps) c = to_lower(c);
  FeatureSet out;
  for (int order : orders) {
    const auto n = static_cast<std::size_t>(order);
    for (std::size_t start = 0; start + n <= cps.size(); ++start) {
      out.insert(encode_utf8(std::span<const char32_t>(cps.data() + start, n)));
    }
  }
  return out;
}

FeatureSet char_ngrams(std::string_view text, std::initializer_list<int> orders) {
  return char_ngrams(text, std::span<const int>(orders.begin(), orders.size()));
}

FeatureSet extract_features(const LabeledInstance& instance, const UserNetworkProfile& profile,
                            const FeatureSetSelector& selector) {
  FeatureSet out;
  for (auto family : selector.families()) {
    if (family == FeatureFamily::Txt) {
      const auto tokens = tokenize(instance.text);
      for (const auto& gram : word_ngrams(tokens, kWordOrders)) out.insert(std::string(kWordPrefix) + gram);
      for (const auto& gram : char_ngrams(instance.text, kCharOrders)) out.insert(std::string(kCharPrefix) + gram);
      continue;
    }
    const auto& fam = info(family);
    for (const auto& item : field_of(profile, fam.field)) out.insert(std::string(fam.prefix) + item);
  }
  return out;
}

std::string_view strip_namespace(std::string_view feature) {
  const auto colon = feature.find(':');
  return colon == std::string_view::npos ? feature : feature.substr(colon + 1);
}

FeatureSpace::FeatureSpace(std::vector<std::string> sorted_unique_features, FeatureSetSelector selector)
    : features_(std::move(sorted_unique_features)), selector_(selector) {
  for (std::size_t i = 1; i < features_.size(); ++i) {
    if (!(features_[i - 1] < features_[i])) throw ArgumentError("feature space columns must be sorted and unique");
  }
}

std::int64_t FeatureSpace::index_of(std::string_view feature) const {
  const auto it = std::lower_bound(features_.begin(), features_.end(), feature,
                                   [](const std::string& a, std::string_view b) { return a < b; });
  if (it == features_.end() || *it != feature) return -1;
  return it - features_.begin();
}

std::string FeatureSpace::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    for (char c : features_[i]) {
      switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
      }
    }
    out += '\t';
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

FeatureSpace FeatureSpace::deserialize(std::string_view content, FeatureSetSelector selector) {
  std::vector<std::string> features;
  const auto rows = detail::split(content, '\n');
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto row = rows[r];
    if (row.empty() && r + 1 == rows.size()) break;
    const auto tab = row.rfind('\t');
    if (tab == std::string_view::npos) throw DataError("feature space line " + std::to_string(r + 1) + " has no tab");
    std::string feature;
    const auto escaped = row.substr(0, tab);
    for (std::size_t i = 0; i < escaped.size(); ++i) {
      if (escaped[i] != '\\' || i + 1 == escaped.size()) {
        feature += escaped[i];
        continue;
      }
      switch (escaped[++i]) {
        case 't': feature += '\t'; break;
        case 'n': feature += '\n'; break;
        case 'r': feature += '\r'; break;
        default: feature += escaped[i];
      }
    }
    if (std::to_string(features.size()) != row.substr(tab + 1)) {
      throw DataError("feature space line " + std::to_string(r + 1) + " has out-of-order index");
    }
    features.push_back(std::move(feature));
  }
  try {
    return FeatureSpace(std::move(features), selector);
  } catch (const ArgumentError& e) {
    throw DataError(e.what());
  }
}

FeatureSpace build_feature_space(std::span<const FeatureSet> train_sets, const FeatureSetSelector& selector,
                                 std::size_t min_df) {
  if (train_sets.empty()) throw ArgumentError("no training feature sets");
  if (min_df < 1) throw ArgumentError("min_df must be >= 1");
  std::map<std::string_view, std::size_t> df;
  for (const auto& set : train_sets) {
    for (const auto& f : set) ++df[f];
  }
  std::vector<std::string> columns;
  for (const auto& [feature, count] : df) {
    if (count >= min_df) columns.emplace_back(feature);
  }
  if (columns.empty()) throw DataError("empty feature space");
  return FeatureSpace(std::move(columns), selector);
}

SparseBooleanVector vectorize(const FeatureSet& features, const FeatureSpace& space) {
  SparseBooleanVector v;
  v.dimension = space.size();
  for (const auto& f : features) {
    const auto idx = space.index_of(f);
    if (idx >= 0) v.indices.push_back(static_cast<std::uint32_t>(idx));
  }
  // FeatureSet iterates in lexicographic order and columns are ranks, so the
  // indices are already increasing.
  return v;
}

}  // namespace stance
