#include "stance/corpus.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <unordered_set>

#include <json.hpp>

#include "stance/error.hpp"
#include "text_util.hpp"

namespace stance {

namespace {

struct FieldName {
  ProfileField field;
  std::string_view key;
  std::string_view family;
};

constexpr std::array<FieldName, 6> kFieldNames = {{
    {ProfileField::InMentions, "in_mentions", "IN_AT"},
    {ProfileField::InDomains, "in_domains", "IN_DM"},
    {ProfileField::PnMentions, "pn_mentions", "PN_AT"},
    {ProfileField::PnDomains, "pn_domains", "PN_DM"},
    {ProfileField::CnFriends, "cn_friends", "CN_FR"},
    {ProfileField::CnFollowers, "cn_followers", "CN_FL"},
}};

bool is_domain_field(ProfileField field) {
  return field == ProfileField::InDomains || field == ProfileField::PnDomains;
}

const UserNetworkProfile& empty_profile() {
  static const UserNetworkProfile empty;
  return empty;
}

}  // namespace

const StringSet& field_of(const UserNetworkProfile& profile, ProfileField field) {
  switch (field) {
    case ProfileField::InMentions: return profile.in_mentions;
    case ProfileField::InDomains: return profile.in_domains;
    case ProfileField::PnMentions: return profile.pn_mentions;
    case ProfileField::PnDomains: return profile.pn_domains;
    case ProfileField::CnFriends: return profile.cn_friends;
    case ProfileField::CnFollowers: return profile.cn_followers;
  }
  throw ArgumentError("invalid profile field");
}

StringSet& field_of(UserNetworkProfile& profile, ProfileField field) {
  return const_cast<StringSet&>(field_of(std::as_const(profile), field));
}

ProfileField parse_profile_field(std::string_view name) {
  const std::string lowered = detail::ascii_lower(detail::trim(name));
  for (const auto& f : kFieldNames) {
    if (lowered == f.key || lowered == detail::ascii_lower(f.family)) return f.field;
  }
  throw ArgumentError("invalid profile field '" + std::string(name) + "'");
}

std::string_view to_string(ProfileField field) {
  for (const auto& f : kFieldNames) {
    if (f.field == field) return f.family;
  }
  return "?";
}

const UserNetworkProfile& Dataset::profile_for(const LabeledInstance& instance) const {
  const auto it = profiles.find(instance.author_id);
  return it == profiles.end() ? empty_profile() : it->second;
}

Dataset Dataset::subset_topic(std::string_view topic) const {
  Dataset out;
  for (const auto& inst : instances) {
    if (inst.topic != topic) continue;
    out.instances.push_back(inst);
    if (auto it = profiles.find(inst.author_id); it != profiles.end()) {
      out.profiles.emplace(it->first, it->second);
    }
  }
  if (!out.instances.empty()) out.topics.emplace_back(topic);
  return out;
}

std::string normalize_account(std::string_view raw) {
  raw = detail::trim(raw);
  while (!raw.empty() && raw.front() == '@') raw.remove_prefix(1);
  return detail::ascii_lower(raw);
}

std::string normalize_domain(std::string_view raw) {
  std::string host = detail::ascii_lower(detail::trim(raw));
  if (const auto scheme = host.find("://"); scheme != std::string::npos) {
    host.erase(0, scheme + 3);
  } else if (host.starts_with("//")) {
    host.erase(0, 2);
  }
  if (const auto end = host.find_first_of("/?#"); end != std::string::npos) host.resize(end);
  if (const auto at = host.rfind('@'); at != std::string::npos) host.erase(0, at + 1);
  if (const auto colon = host.find(':'); colon != std::string::npos) host.resize(colon);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.starts_with("www.")) host.erase(0, 4);
  return host;
}

UserNetworkProfile normalize(UserNetworkProfile profile) {
  profile.user_id = std::string(detail::trim(profile.user_id));
  for (const auto& f : kFieldNames) {
    StringSet& set = field_of(profile, f.field);
    StringSet cleaned;
    for (const auto& item : set) {
      std::string norm = is_domain_field(f.field) ? normalize_domain(item) : normalize_account(item);
      if (!norm.empty()) cleaned.insert(std::move(norm));
    }
    set = std::move(cleaned);
  }
  return profile;
}

std::vector<LabeledInstance> parse_semeval_tsv(std::string_view content) {
  std::vector<LabeledInstance> out;
  const auto rows = detail::lines(content);
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (detail::trim(rows[i]).empty()) continue;
    const auto fields = detail::split(rows[i], '\t');
    if (fields.size() < 4 || fields.size() > 5) {
      throw DataError("malformed line " + std::to_string(line_no) + ": expected 4 or 5 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    LabeledInstance inst;
    inst.tweet_id = std::string(detail::trim(fields[0]));
    inst.topic = std::string(detail::trim(fields[1]));
    inst.text = std::string(fields[2]);
    try {
      inst.label = parse_stance(fields[3]);
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " at line " + std::to_string(line_no));
    }
    inst.author_id = fields.size() == 5 ? std::string(detail::trim(fields[4])) : std::string();
    if (inst.author_id.empty()) inst.author_id = inst.tweet_id;
    if (inst.tweet_id.empty()) throw DataError("empty ID at line " + std::to_string(line_no));
    if (inst.topic.empty()) throw DataError("empty Target at line " + std::to_string(line_no));
    if (!seen.insert(inst.tweet_id).second) {
      throw DataError("duplicate tweet id '" + inst.tweet_id + "' at line " + std::to_string(line_no));
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<LabeledInstance> load_semeval_tsv(const std::filesystem::path& path) {
  const std::string content = detail::read_file(path);
  try {
    return parse_semeval_tsv(content);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_semeval_tsv(const std::vector<LabeledInstance>& instances) {
  std::string out = "ID\tTarget\tTweet\tStance\tAuthorID\n";
  for (const auto& inst : instances) {
    out += inst.tweet_id;
    out += '\t';
    out += inst.topic;
    out += '\t';
    out += inst.text;
    out += '\t';
    out += to_semeval(inst.label);
    out += '\t';
    out += inst.author_id;
    out += '\n';
  }
  return out;
}

ProfileLoadResult parse_network_profiles(std::string_view content) {
  ProfileLoadResult result;
  const auto rows = detail::lines(content);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (detail::trim(rows[i]).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(rows[i]);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("unparseable profile at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object()) throw DataError("profile at line " + std::to_string(line_no) + " is not an object");
    if (!record.contains("user_id") || !record["user_id"].is_string()) {
      throw DataError("missing user_id at line " + std::to_string(line_no));
    }
    UserNetworkProfile profile;
    profile.user_id = record["user_id"].get<std::string>();
    for (const auto& f : kFieldNames) {
      const auto it = record.find(std::string(f.key));
      if (it == record.end() || it->is_null()) continue;
      if (!it->is_array()) {
        throw DataError("field '" + std::string(f.key) + "' is not an array at line " + std::to_string(line_no));
      }
      auto& set = field_of(profile, f.field);
      for (const auto& item : *it) {
        if (!item.is_string()) {
          throw DataError("non-string entry in '" + std::string(f.key) + "' at line " + std::to_string(line_no));
        }
        set.insert(item.get<std::string>());
      }
    }
    profile = normalize(std::move(profile));
    if (profile.user_id.empty()) throw DataError("empty user_id at line " + std::to_string(line_no));
    auto [it, inserted] = result.profiles.insert_or_assign(profile.user_id, std::move(profile));
    if (!inserted) ++result.duplicate_user_ids;
  }
  return result;
}

ProfileLoadResult load_network_profiles(const std::filesystem::path& path) {
  const std::string content = detail::read_file(path);
  try {
    return parse_network_profiles(content);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_profile_line(const UserNetworkProfile& profile) {
  nlohmann::ordered_json record;
  record["user_id"] = profile.user_id;
  for (const auto& f : kFieldNames) {
    const auto& set = field_of(profile, f.field);
    record[std::string(f.key)] = std::vector<std::string>(set.begin(), set.end());
  }
  return record.dump();
}

JoinResult join(std::vector<LabeledInstance> instances, const ProfileMap& profiles, bool require_profile) {
  JoinResult result;
  Dataset& ds = result.dataset;
  for (auto& inst : instances) {
    const auto it = profiles.find(inst.author_id);
    if (it == profiles.end()) {
      if (require_profile) {
        ++result.dropped;
        continue;
      }
      UserNetworkProfile empty;
      empty.user_id = inst.author_id;
      ds.profiles.try_emplace(inst.author_id, std::move(empty));
    } else {
      ds.profiles.try_emplace(inst.author_id, it->second);
    }
    if (std::find(ds.topics.begin(), ds.topics.end(), inst.topic) == ds.topics.end()) {
      ds.topics.push_back(inst.topic);
    }
    ds.instances.push_back(std::move(inst));
  }
  return result;
}

}  // namespace stance
