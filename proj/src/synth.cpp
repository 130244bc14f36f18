#include "stance/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "stance/error.hpp"
#include "stance/rng.hpp"
#include "text_util.hpp"

namespace stance {

namespace {

constexpr std::array<ProfileField, 6> kFields = {ProfileField::InMentions, ProfileField::InDomains,
                                                 ProfileField::PnMentions, ProfileField::PnDomains,
                                                 ProfileField::CnFriends,  ProfileField::CnFollowers};

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::string_view community_tag(StanceLabel label) {
  switch (label) {
    case StanceLabel::Against: return "ag";
    case StanceLabel::Favor: return "fav";
    case StanceLabel::None: return "sh";
  }
  return "sh";
}

// Account names are shared by the mention, friend and follower families and
// domain names by the two domain families, so the same account can surface in
// several networks.
std::string pool_item(std::size_t topic, std::size_t field, std::string_view pool, std::uint64_t k) {
  const std::string t = "t" + std::to_string(topic);
  const std::string item = std::string(pool) + std::to_string(k);
  if (kFields[field] == ProfileField::InDomains || kFields[field] == ProfileField::PnDomains) {
    return t + "-" + item + ".example.com";
  }
  return t + "_" + item;
}

StanceLabel draw_stance(Rng& rng, const std::array<double, 3>& weights) {
  const double total = weights[0] + weights[1] + weights[2];
  double u = rng.uniform() * total;
  for (std::size_t c = 0; c < 2; ++c) {
    if (u < weights[c]) return kCanonicalLabels[c];
    u -= weights[c];
  }
  return weights[2] > 0.0 ? StanceLabel::None : (weights[1] > 0.0 ? StanceLabel::Favor : StanceLabel::Against);
}

std::string make_tweet(Rng& rng, const SynthConfig& cfg, std::size_t topic, StanceLabel stance) {
  std::vector<std::string> words;
  for (std::size_t w = 0; w < cfg.words_per_tweet; ++w) {
    words.push_back("w" + std::to_string(rng.below(cfg.generic_vocabulary)));
  }
  if (stance != StanceLabel::None && rng.bernoulli(cfg.text_signal)) {
    const auto pos = rng.below(words.size() + 1);
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos),
                 "t" + std::to_string(topic) + std::string(community_tag(stance)) +
                     std::to_string(rng.below(cfg.stance_vocabulary)));
  }
  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  return text;
}

void add_topic(Dataset& ds, const std::string& topic) {
  if (std::find(ds.topics.begin(), ds.topics.end(), topic) == ds.topics.end()) ds.topics.push_back(topic);
}

}  // namespace

void SynthConfig::validate() const {
  if (topics.empty()) throw ArgumentError("synth needs at least one topic");
  for (const auto& t : topics) {
    if (t.empty() || t.find_first_of("\t\r\n") != std::string::npos) throw ArgumentError("invalid topic name");
  }
  if (users_per_topic < 2) throw ArgumentError("users_per_topic must be at least 2");
  if (tweets_per_user < 1) throw ArgumentError("tweets_per_user must be at least 1");
  if (stance_prior.size() != 1 && stance_prior.size() != topics.size()) {
    throw ArgumentError("stance_prior needs one entry or one per topic");
  }
  for (const auto& prior : stance_prior) {
    for (double w : prior) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("stance prior weights must be non-negative");
    }
    if (prior[0] + prior[1] + prior[2] <= 0.0) throw ArgumentError("stance prior must have positive mass");
  }
  if (!is_probability(homophily)) throw ArgumentError("homophily must be in [0, 1]");
  if (!is_probability(text_signal)) throw ArgumentError("text_signal must be in [0, 1]");
  if (!is_probability(silent_fraction)) throw ArgumentError("silent_fraction must be in [0, 1]");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ArgumentError("train_fraction must be in (0, 1)");
  for (const auto& pool : pools) {
    if (pool.community < 1 || pool.shared < 1) throw ArgumentError("pool sizes must be at least 1");
  }
  if (generic_vocabulary < 1 || stance_vocabulary < 1) throw ArgumentError("vocabulary sizes must be at least 1");
}

SynthCorpus generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SynthCorpus corpus;
  std::uint64_t next_tweet = 100000;

  for (std::size_t ti = 0; ti < cfg.topics.size(); ++ti) {
    const auto& topic = cfg.topics[ti];
    const auto& prior = cfg.stance_prior.size() == 1 ? cfg.stance_prior[0] : cfg.stance_prior[ti];

    std::vector<std::size_t> order(cfg.users_per_topic);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    auto train_users = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(order.size())));
    train_users = std::clamp<std::size_t>(train_users, 1, order.size() - 1);
    std::vector<bool> in_train(order.size(), false);
    for (std::size_t i = 0; i < train_users; ++i) in_train[order[i]] = true;

    for (std::size_t u = 0; u < cfg.users_per_topic; ++u) {
      char id[32];
      std::snprintf(id, sizeof(id), "t%zuu%04zu", ti, u);
      GroundTruth truth{id, topic, draw_stance(rng, prior), rng.bernoulli(cfg.silent_fraction)};

      UserNetworkProfile profile;
      profile.user_id = truth.user_id;
      for (std::size_t f = 0; f < kFields.size(); ++f) {
        const auto& pool = cfg.pools[f];
        auto& set = field_of(profile, kFields[f]);
        for (std::size_t d = 0; d < pool.per_user; ++d) {
          const bool homophilous = truth.latent_stance != StanceLabel::None && rng.bernoulli(cfg.homophily);
          if (homophilous) {
            set.insert(pool_item(ti, f, community_tag(truth.latent_stance), rng.below(pool.community)));
          } else {
            set.insert(pool_item(ti, f, "sh", rng.below(pool.shared)));
          }
        }
      }

      Dataset& target = in_train[u] ? corpus.train : corpus.test;
      add_topic(target, topic);
      for (std::size_t k = 0; k < cfg.tweets_per_user; ++k) {
        LabeledInstance inst;
        inst.tweet_id = std::to_string(next_tweet++);
        inst.author_id = truth.user_id;
        inst.topic = topic;
        inst.label = truth.latent_stance;
        if (!truth.silent) inst.text = make_tweet(rng, cfg, ti, truth.latent_stance);
        target.instances.push_back(std::move(inst));
      }
      target.profiles.emplace(profile.user_id, std::move(profile));
      corpus.truth.push_back(std::move(truth));
    }
  }
  return corpus;
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_file(dir / "train.tsv", format_semeval_tsv(corpus.train.instances));
  detail::write_file(dir / "test.tsv", format_semeval_tsv(corpus.test.instances));

  ProfileMap all = corpus.train.profiles;
  for (const auto& [id, p] : corpus.test.profiles) all.emplace(id, p);
  std::string profiles;
  for (const auto& [id, p] : all) profiles += format_profile_line(p) + "\n";
  detail::write_file(dir / "profiles.jsonl", profiles);

  std::string truth = "user_id,topic,latent_stance,silent\n";
  for (const auto& t : corpus.truth) {
    truth += t.user_id + ",\"" + t.topic + "\"," + std::string(to_string(t.latent_stance)) + "," +
             (t.silent ? "1" : "0") + "\n";
  }
  detail::write_file(dir / "truth.csv", truth);
}

}  // namespace stance
