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

#include <span>
#include <vector>

#include "pvc/corpus.hpp"

namespace pvc {

/// 1.0 for every feature sharing at least one message with a seed (seeds
/// included when they occur), 0.0 otherwise.
std::vector<double> cooccurrence_scores(const IndexedCorpus& corpus, std::span<const FeatureId> seeds);

struct DqeConfig {
  int k = 100;
  int max_iters = 10;
};

struct DqeResult {
  std::vector<double> scores;
  /// Final keyword set, sorted by descending score then ascending id.
  std::vector<FeatureId> keywords;
  int iterations = 0;
  /// Keyword set repeated before max_iters ran out.
  bool stabilized = false;
  /// The relevant message set was empty on the final iteration.
  bool degenerate = false;
};

/// Dynamic query expansion. Each round scores every feature by its document
/// frequency within the messages that contain a current keyword, then keeps
/// the k best (ties by ascending id) as the next keyword set.
DqeResult dqe_scores(const IndexedCorpus& corpus, std::span<const FeatureId> seeds, const DqeConfig& config);

}  // namespace pvc
