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

#include "pvc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pvc/error.hpp"

namespace pvc {

namespace {

struct Population {
  std::vector<bool> included;
  std::vector<bool> is_target;
  std::size_t n_included = 0;
  std::size_t n_targets = 0;
};

Population population(std::size_t n, std::span<const FeatureId> targets, std::span<const FeatureId> exclude) {
  Population p{std::vector<bool>(n, true), std::vector<bool>(n, false)};
  for (auto k : exclude) {
    if (k >= n) throw std::invalid_argument("excluded feature id out of range");
    p.included[k] = false;
  }
  for (auto k : targets) {
    if (k >= n) throw std::invalid_argument("target feature id out of range");
    if (!p.included[k]) throw std::invalid_argument("a target feature is also excluded");
    p.is_target[k] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.n_included += p.included[i];
    p.n_targets += p.is_target[i];
  }
  return p;
}

}  // namespace

RocResult roc_curve(std::span<const double> scores, std::span<const FeatureId> targets, std::span<const FeatureId> exclude) {
  const auto pop = population(scores.size(), targets, exclude);
  const auto n_pos = pop.n_targets;
  const auto n_neg = pop.n_included - pop.n_targets;
  if (n_pos == 0) throw DegenerateError("ROC needs at least one target feature");
  if (n_neg == 0) throw DegenerateError("ROC needs at least one non-target feature");

  std::vector<std::size_t> order;
  order.reserve(pop.n_included);
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (pop.included[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocResult roc;
  roc.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) (pop.is_target[order[i]] ? tp : fp)++;
    const RocPoint next{static_cast<double>(fp) / static_cast<double>(n_neg),
                        static_cast<double>(tp) / static_cast<double>(n_pos)};
    const auto& last = roc.points.back();
    roc.auc += (next.fpr - last.fpr) * (next.tpr + last.tpr) * 0.5;
    roc.points.push_back(next);
  }
  return roc;
}

ScoreSummary summarize(std::span<const double> scores, std::span<const FeatureId> targets,
                       std::span<const FeatureId> exclude) {
  const auto pop = population(scores.size(), targets, exclude);
  if (pop.n_included == 0) throw DegenerateError("no scored features remain after exclusion");
  double total = 0.0, target_total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!pop.included[i]) continue;
    total += scores[i];
    if (pop.is_target[i]) target_total += scores[i];
  }
  ScoreSummary s;
  const auto n = static_cast<double>(pop.n_included);
  s.overall_mean = total / n;
  s.target_mean = pop.n_targets ? target_total / static_cast<double>(pop.n_targets) : 0.0;
  const auto n_non = pop.n_included - pop.n_targets;
  s.nontarget_mean = n_non ? (total - target_total) / static_cast<double>(n_non) : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (pop.included[i]) ss += (scores[i] - s.overall_mean) * (scores[i] - s.overall_mean);
  s.overall_std = std::sqrt(ss / n);
  return s;
}

double lift(std::span<const double> scores, std::span<const FeatureId> targets, std::span<const FeatureId> exclude) {
  if (targets.empty()) throw DegenerateError("lift needs at least one target feature");
  const auto s = summarize(scores, targets, exclude);
  if (!(s.overall_std > 0.0)) throw DegenerateError("lift is undefined for constant scores (zero standard deviation)");
  return (s.target_mean - s.overall_mean) / s.overall_std;
}

std::vector<Ranked> top_k(std::vector<Ranked> entries, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const auto keep = std::min(k, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + static_cast<long>(keep), entries.end(),
                    [](const Ranked& a, const Ranked& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.name < b.name;
                    });
  entries.resize(keep);
  return entries;
}

std::vector<Ranked> top_words(std::span<const double> scores, const std::vector<std::string>& phrases, std::size_t k,
                              std::span<const FeatureId> exclude) {
  if (scores.size() != phrases.size()) throw std::invalid_argument("scores and phrases differ in length");
  std::vector<bool> skip(scores.size(), false);
  for (auto e : exclude)
    if (e < skip.size()) skip[e] = true;
  std::vector<Ranked> entries;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (!skip[i]) entries.push_back({phrases[i], scores[i]});
  return top_k(std::move(entries), k);
}

UserRanking rank_users(const ModelParams& params, const std::vector<std::string>& users, std::size_t k) {
  if (params.bully.size() != users.size() || params.victim.size() != users.size())
    throw std::invalid_argument("user score vectors and user names differ in length");
  std::vector<Ranked> bullies, victims;
  for (std::size_t i = 0; i < users.size(); ++i) {
    bullies.push_back({users[i], params.bully[i]});
    victims.push_back({users[i], params.victim[i]});
  }
  return {top_k(std::move(bullies), k), top_k(std::move(victims), k)};
}

}  // namespace pvc
