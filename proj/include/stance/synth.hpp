#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stance/corpus.hpp"

namespace stance {

// Pool sizes of one network family. Favor and Against users draw from their
// own community pool; None users and the non-homophilous share of every
// draw come from the shared pool.
struct PoolSpec {
  std::size_t community = 40;
  std::size_t shared = 200;
  std::size_t per_user = 12;  // draws per user (duplicates collapse)
};

struct SynthConfig {
  std::vector<std::string> topics = {"Atheism", "Climate Change is a Real Concern", "Feminist Movement",
                                     "Hillary Clinton", "Legalization of Abortion"};
  std::size_t users_per_topic = 200;
  std::size_t tweets_per_user = 3;
  // Per topic, weights over canonical order [Against, Favor, None]; need not
  // sum to one. A single entry applies to every topic.
  std::vector<std::array<double, 3>> stance_prior = {{0.4, 0.4, 0.2}};
  double homophily = 0.9;        // chance a network draw comes from the stance pool
  double text_signal = 0.5;      // chance a tweet carries a stance token
  double silent_fraction = 0.0;  // users whose tweets are empty
  std::array<PoolSpec, 6> pools{};  // indexed by ProfileField
  std::size_t generic_vocabulary = 300;
  std::size_t stance_vocabulary = 20;
  std::size_t words_per_tweet = 8;
  double train_fraction = 0.7;
  std::uint64_t seed = 1;

  // Throws ArgumentError when a probability leaves [0, 1], a pool is empty,
  // the prior has a negative or all-zero entry, or sizes are zero.
  void validate() const;
};

struct GroundTruth {
  std::string user_id;
  std::string topic;
  StanceLabel latent_stance = StanceLabel::None;
  bool silent = false;
};

struct SynthCorpus {
  Dataset train;
  Dataset test;
  std::vector<GroundTruth> truth;
};

// Deterministic per seed. Users are split between train and test, so no
// author appears in both.
SynthCorpus generate(const SynthConfig& config);

// Writes train.tsv, test.tsv, profiles.jsonl and truth.csv into `dir`.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace stance
