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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvc/corpus.hpp"

namespace pvc {

struct SynthConfig {
  int n_users = 20;
  int n_words = 50;
  int n_bully_words = 10;
  int n_messages = 500;
  double bully_user_fraction = 0.2;
  double score_noise = 0.05;
  std::uint64_t rng_seed = 42;

  /// Throws InputError on counts < 1, n_bully_words > n_words, a fraction
  /// outside (0, 1) or negative noise.
  void validate() const;
};

/// Planted ground truth and the corpus sampled from it.
struct PlantedWorld {
  std::vector<std::string> users;
  std::vector<double> true_b;
  std::vector<double> true_v;
  std::vector<std::string> words;
  std::vector<double> true_w;
  std::vector<Message> messages;
  /// Planted bully words in vocabulary order; the pool for split_lexicon.
  Lexicon bully_words;
};

/// Regeneration attempts allowed for covering every planted bully word.
inline constexpr int kSynthMaxAttempts = 100;

/// Samples a corpus whose bully-word usage per message follows
/// clamp(b_sender + v_receiver + noise, 0, 1). Deterministic in rng_seed.
/// Throws DegenerateError when no attempt covers every bully word.
PlantedWorld generate(const SynthConfig& config);

}  // namespace pvc
