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
#include <string>
#include <utility>
#include <vector>

#include "pvc/corpus.hpp"
#include "pvc/solver.hpp"

namespace pvc {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Threshold sweep over distinct score values, highest first. Features in
/// `exclude` are removed before evaluation; tied scores cross the threshold
/// together. Throws DegenerateError if no target or no non-target remains,
/// std::invalid_argument if targets and exclude overlap.
RocResult roc_curve(std::span<const double> scores, std::span<const FeatureId> targets,
                    std::span<const FeatureId> exclude = {});

/// (mean target score - mean score) / population std of all scores, over the
/// features not in `exclude`. Throws DegenerateError for constant scores.
double lift(std::span<const double> scores, std::span<const FeatureId> targets, std::span<const FeatureId> exclude = {});

struct ScoreSummary {
  double target_mean = 0.0;
  double nontarget_mean = 0.0;
  double overall_mean = 0.0;
  double overall_std = 0.0;
};
ScoreSummary summarize(std::span<const double> scores, std::span<const FeatureId> targets,
                       std::span<const FeatureId> exclude = {});

struct Ranked {
  std::string name;
  double score = 0.0;
  bool operator==(const Ranked&) const = default;
};

/// Orders descending by score, ties by name ascending, and keeps the first k.
std::vector<Ranked> top_k(std::vector<Ranked> entries, std::size_t k);

/// Highest-scoring features outside `exclude`.
std::vector<Ranked> top_words(std::span<const double> scores, const std::vector<std::string>& phrases, std::size_t k,
                              std::span<const FeatureId> exclude = {});

struct UserRanking {
  std::vector<Ranked> bullies;
  std::vector<Ranked> victims;
};
UserRanking rank_users(const ModelParams& params, const std::vector<std::string>& users, std::size_t k);

}  // namespace pvc
