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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pvc/corpus.hpp"

namespace pvc {

/// Bully score per user, victim score per user, indicator score per
/// feature, and the ridge weight shared by all three blocks.
struct ModelParams {
  std::vector<double> bully;
  std::vector<double> victim;
  std::vector<double> word;
  double lambda = 1.0;

  static ModelParams zeros(const IndexedCorpus& corpus, double lambda);
};

struct SolverConfig {
  double lambda = 1.0;
  int max_iters = 100;
  /// Converged once both (J_prev - J) / max(J_prev, 1e-12) and the largest
  /// coordinate step relative to max(1, |x|_inf) drop below this.
  double tol = 1e-6;
};

struct FitTrace {
  /// Objective after each completed iteration (b, v, then w update).
  std::vector<double> objective;
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  ModelParams params;
  FitTrace trace;
};

/// Called after every completed iteration with its 1-based index.
using FitObserver = std::function<void(int, const ModelParams&)>;

/// Throws std::invalid_argument when vector lengths disagree with the corpus
/// or lambda is not positive.
void check_params(const ModelParams& params, const IndexedCorpus& corpus);

/// J = lambda/2 (|b|^2 + |v|^2 + |w|^2) + 1/2 sum_m sum_{k in f(m)} (b_s(m) + v_r(m) - w_k)^2.
/// Messages are visited in stored order and features in ascending id order.
double objective(const ModelParams& params, const IndexedCorpus& corpus);

/// Partial derivatives of the objective with respect to every coordinate.
struct Gradient {
  std::vector<double> bully;
  std::vector<double> victim;
  std::vector<double> word;
};
Gradient gradient(const ModelParams& params, const IndexedCorpus& corpus);

/// Exact minimizer of the objective over b with v and w held fixed.
std::vector<double> update_bully(const ModelParams& params, const IndexedCorpus& corpus);
/// Exact minimizer over v with b and w held fixed.
std::vector<double> update_victim(const ModelParams& params, const IndexedCorpus& corpus);
/// Exact minimizer over the non-seed entries of w with b and v held fixed;
/// seed entries are returned as exactly 1.0.
std::vector<double> update_vocab(const ModelParams& params, const IndexedCorpus& corpus, std::span<const FeatureId> seeds);

/// Alternating least squares from b = v = 0, w = seed indicator, updating
/// b, v, w in that order each iteration.
///
/// Throws InputError if `seeds` is empty or names a feature outside the
/// vocabulary.
FitResult fit(const IndexedCorpus& corpus, std::span<const FeatureId> seeds, const SolverConfig& config,
              const FitObserver& observer = {});

/// Largest number of free coordinates solve_exact accepts.
inline constexpr std::size_t kMaxExactCoordinates = 2000;

/// Global minimizer of the seed-constrained objective from one dense
/// Cholesky solve of the normal equations. Intended as a reference for
/// small instances; throws InputError above kMaxExactCoordinates.
ModelParams solve_exact(const IndexedCorpus& corpus, std::span<const FeatureId> seeds, double lambda);

}  // namespace pvc
