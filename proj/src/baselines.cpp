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

#include "pvc/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pvc {

namespace {

std::vector<bool> mask_of(const IndexedCorpus& corpus, std::span<const FeatureId> ids) {
  std::vector<bool> mask(corpus.num_features(), false);
  for (auto k : ids) {
    if (k >= corpus.num_features()) throw std::invalid_argument("feature id out of range");
    mask[k] = true;
  }
  return mask;
}

}  // namespace

std::vector<double> cooccurrence_scores(const IndexedCorpus& corpus, std::span<const FeatureId> seeds) {
  const auto is_seed = mask_of(corpus, seeds);
  std::vector<double> scores(corpus.num_features(), 0.0);
  for (MessageIndex m = 0; m < corpus.num_interactions(); ++m) {
    const auto f = corpus.features(m);
    if (std::none_of(f.begin(), f.end(), [&](FeatureId k) { return is_seed[k]; })) continue;
    for (auto k : f) scores[k] = 1.0;
  }
  return scores;
}

DqeResult dqe_scores(const IndexedCorpus& corpus, std::span<const FeatureId> seeds, const DqeConfig& config) {
  if (config.k < 1) throw std::invalid_argument("dqe k must be >= 1");
  if (config.max_iters < 1) throw std::invalid_argument("dqe max_iters must be >= 1");

  const auto n = corpus.num_features();
  std::vector<FeatureId> keywords(seeds.begin(), seeds.end());
  std::sort(keywords.begin(), keywords.end());
  keywords.erase(std::unique(keywords.begin(), keywords.end()), keywords.end());
  mask_of(corpus, keywords);

  DqeResult result;
  result.scores.assign(n, 0.0);
  std::vector<bool> relevant(corpus.num_interactions());
  std::vector<FeatureId> order(n);
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    std::fill(relevant.begin(), relevant.end(), false);
    std::size_t n_relevant = 0;
    for (auto k : keywords)
      for (auto m : corpus.containing(k))
        if (!relevant[m]) {
          relevant[m] = true;
          ++n_relevant;
        }

    std::fill(result.scores.begin(), result.scores.end(), 0.0);
    if (n_relevant > 0) {
      for (MessageIndex m = 0; m < relevant.size(); ++m)
        if (relevant[m])
          for (auto k : corpus.features(m)) result.scores[k] += 1.0;
      for (auto& s : result.scores) s /= static_cast<double>(n_relevant);
    }
    result.degenerate = n_relevant == 0;

    std::iota(order.begin(), order.end(), FeatureId{0});
    const auto top = std::min<std::size_t>(static_cast<std::size_t>(config.k), n);
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(top), order.end(), [&](FeatureId a, FeatureId b) {
      if (result.scores[a] != result.scores[b]) return result.scores[a] > result.scores[b];
      return a < b;
    });
    std::vector<FeatureId> next(order.begin(), order.begin() + static_cast<long>(top));

    result.iterations = iter;
    if (result.degenerate) {
      // Nothing to re-extract from; the keyword set is pure tie-breaking.
      result.keywords = std::move(next);
      break;
    }
    auto sorted_next = next;
    std::sort(sorted_next.begin(), sorted_next.end());
    const bool repeated = sorted_next == keywords;
    result.keywords = std::move(next);
    if (repeated) {
      result.stabilized = true;
      break;
    }
    keywords = std::move(sorted_next);
  }
  return result;
}

}  // namespace pvc
