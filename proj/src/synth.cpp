/*
 *  Copyright 2026 The PVC Authors. All Rights Reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#include "pvc/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "pvc/error.hpp"

namespace pvc {

namespace {

// Planted score ranges for the two user populations.
constexpr double kHighLo = 0.8, kHighHi = 1.0;
constexpr double kLowLo = 0.0, kLowHi = 0.05;
constexpr int kMinLength = 3, kMaxLength = 8;

std::string numbered(char prefix, int i, int count) {
  const auto width = std::to_string(std::max(count - 1, 0)).size();
  auto digits = std::to_string(i);
  return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_users < 1 || n_words < 1 || n_bully_words < 1 || n_messages < 1)
    throw InputError("synthetic counts must all be >= 1");
  if (n_bully_words > n_words) throw InputError("n_bully_words cannot exceed n_words");
  if (!(bully_user_fraction > 0.0 && bully_user_fraction < 1.0))
    throw InputError("bully_user_fraction must lie in (0, 1)");
  if (!(score_noise >= 0.0)) throw InputError("score_noise must be >= 0");
}

PlantedWorld generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  PlantedWorld world;
  auto planted_score = [&] {
    const bool high = unit(rng) < config.bully_user_fraction;
    const double u = unit(rng);
    return high ? kHighLo + (kHighHi - kHighLo) * u : kLowLo + (kLowHi - kLowLo) * u;
  };
  for (int i = 0; i < config.n_users; ++i) {
    world.users.push_back(numbered('u', i, config.n_users));
    world.true_b.push_back(planted_score());
  }
  for (int i = 0; i < config.n_users; ++i) world.true_v.push_back(planted_score());

  std::vector<int> word_ids(config.n_words);
  std::iota(word_ids.begin(), word_ids.end(), 0);
  std::shuffle(word_ids.begin(), word_ids.end(), rng);
  std::vector<bool> is_bully(config.n_words, false);
  for (int i = 0; i < config.n_bully_words; ++i) is_bully[word_ids[i]] = true;

  std::vector<int> bully_pool, neutral_pool;
  for (int i = 0; i < config.n_words; ++i) {
    world.words.push_back(numbered('w', i, config.n_words));
    world.true_w.push_back(is_bully[i] ? 1.0 : 0.0);
    (is_bully[i] ? bully_pool : neutral_pool).push_back(i);
    if (is_bully[i]) world.bully_words.add(world.words.back());
  }

  std::uniform_int_distribution<int> pick_user(0, config.n_users - 1);
  std::uniform_int_distribution<int> pick_length(kMinLength, kMaxLength);
  std::uniform_int_distribution<std::size_t> pick_bully(0, bully_pool.size() - 1);
  // Neutral words follow a Zipf law over a shuffled rank order, so common
  // filler words are far more frequent than any single bully word.
  std::vector<double> zipf(std::max<std::size_t>(neutral_pool.size(), 1));
  for (std::size_t r = 0; r < zipf.size(); ++r) zipf[r] = 1.0 / static_cast<double>(r + 1);
  std::discrete_distribution<std::size_t> pick_neutral(zipf.begin(), zipf.end());

  for (int attempt = 0; attempt < kSynthMaxAttempts; ++attempt) {
    world.messages.clear();
    std::vector<bool> covered(config.n_words, false);
    for (int m = 0; m < config.n_messages; ++m) {
      const int s = pick_user(rng);
      int r = pick_user(rng);
      while (config.n_users > 1 && r == s) r = pick_user(rng);
      const double p = std::clamp(world.true_b[s] + world.true_v[r] + config.score_noise * gauss(rng), 0.0, 1.0);
      const int length = pick_length(rng);
      std::string text;
      for (int slot = 0; slot < length; ++slot) {
        const bool bully_slot = neutral_pool.empty() || unit(rng) < p;
        const int w = bully_slot ? bully_pool[pick_bully(rng)] : neutral_pool[pick_neutral(rng)];
        covered[w] = true;
        if (!text.empty()) text += ' ';
        text += world.words[w];
      }
      world.messages.push_back({numbered('m', m, config.n_messages), world.users[s], world.users[r], std::move(text)});
    }
    if (std::all_of(bully_pool.begin(), bully_pool.end(), [&](int w) { return covered[w]; })) return world;
  }
  throw DegenerateError("could not cover all " + std::to_string(config.n_bully_words) + " planted bully words in " +
                        std::to_string(kSynthMaxAttempts) + " attempts; increase n_messages or the bully fraction");
}

}  // namespace pvc
