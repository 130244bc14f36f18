#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stance/label.hpp"

namespace stance {

struct LabeledInstance {
  std::string tweet_id;
  std::string author_id;
  std::string topic;
  std::string text;
  StanceLabel label = StanceLabel::None;

  bool operator==(const LabeledInstance&) const = default;
};

using StringSet = std::set<std::string>;

// The six network sets of one account. Accounts are stored lowercase without
// a leading '@'; domains are bare lowercase hostnames.
struct UserNetworkProfile {
  std::string user_id;
  StringSet in_mentions;
  StringSet in_domains;
  StringSet pn_mentions;
  StringSet pn_domains;
  StringSet cn_friends;
  StringSet cn_followers;

  bool operator==(const UserNetworkProfile&) const = default;
};

enum class ProfileField { InMentions, InDomains, PnMentions, PnDomains, CnFriends, CnFollowers };

const StringSet& field_of(const UserNetworkProfile& profile, ProfileField field);
StringSet& field_of(UserNetworkProfile& profile, ProfileField field);

// Accepts the JSON key ("in_mentions") or the feature-family name ("IN_AT").
// Throws ArgumentError for anything else.
ProfileField parse_profile_field(std::string_view name);
std::string_view to_string(ProfileField field);

using ProfileMap = std::map<std::string, UserNetworkProfile>;

struct Dataset {
  std::vector<LabeledInstance> instances;
  ProfileMap profiles;
  std::vector<std::string> topics;  // first-appearance order

  // Profile of the instance's author, or an empty profile when absent.
  const UserNetworkProfile& profile_for(const LabeledInstance& instance) const;

  // Instances of one topic, keeping dataset order.
  Dataset subset_topic(std::string_view topic) const;

  bool operator==(const Dataset&) const = default;
};

std::string normalize_account(std::string_view raw);
// Lowercases and strips scheme, userinfo, path, query, port, a trailing dot
// and a single leading "www.". Other subdomains are kept.
std::string normalize_domain(std::string_view raw);
UserNetworkProfile normalize(UserNetworkProfile profile);

// Tab-separated: header line, then ID, Target, Tweet, Stance[, AuthorID].
std::vector<LabeledInstance> load_semeval_tsv(const std::filesystem::path& path);
std::vector<LabeledInstance> parse_semeval_tsv(std::string_view content);
std::string format_semeval_tsv(const std::vector<LabeledInstance>& instances);

struct ProfileLoadResult {
  ProfileMap profiles;
  std::size_t duplicate_user_ids = 0;  // later records replaced earlier ones
};

// One JSON object per line.
ProfileLoadResult load_network_profiles(const std::filesystem::path& path);
ProfileLoadResult parse_network_profiles(std::string_view content);
std::string format_profile_line(const UserNetworkProfile& profile);

struct JoinResult {
  Dataset dataset;
  std::size_t dropped = 0;
};

JoinResult join(std::vector<LabeledInstance> instances, const ProfileMap& profiles,
                bool require_profile);

}  // namespace stance
