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

#include "pvc/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pvc/error.hpp"
#include "pvc/kernels.hpp"

namespace pvc {

namespace {

constexpr double kObjectiveFloor = 1e-12;

std::vector<bool> seed_mask(const IndexedCorpus& corpus, std::span<const FeatureId> seeds) {
  std::vector<bool> mask(corpus.num_features(), false);
  for (auto k : seeds) {
    if (k >= corpus.num_features()) throw InputError("seed feature id " + std::to_string(k) + " is not in the vocabulary");
    mask[k] = true;
  }
  return mask;
}

// Sum over the messages in `rows` of (sum_{k in f(m)} w_k - |f(m)| * other[partner(m)]),
// together with sum |f(m)|. Shared by the bully and victim updates.
template <class Partner>
void accumulate_user_block(const ModelParams& params, const IndexedCorpus& corpus, std::span<const MessageIndex> rows,
                           const std::vector<double>& other, Partner partner, double& num, double& den) {
  num = 0.0;
  den = 0.0;
  for (auto m : rows) {
    const auto f = corpus.features(m);
    const auto size = static_cast<double>(f.size());
    num += kernels::gather_sum(params.word, f) - size * other[partner(m)];
    den += size;
  }
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ModelParams ModelParams::zeros(const IndexedCorpus& corpus, double lambda) {
  return ModelParams{std::vector<double>(corpus.num_users(), 0.0), std::vector<double>(corpus.num_users(), 0.0),
                     std::vector<double>(corpus.num_features(), 0.0), lambda};
}

void check_params(const ModelParams& params, const IndexedCorpus& corpus) {
  if (params.bully.size() != corpus.num_users() || params.victim.size() != corpus.num_users())
    throw std::invalid_argument("user score vectors do not match the corpus user count");
  if (params.word.size() != corpus.num_features())
    throw std::invalid_argument("word score vector does not match the corpus vocabulary size");
  if (!(params.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

double objective(const ModelParams& params, const IndexedCorpus& corpus) {
  check_params(params, corpus);
  const double ridge = kernels::sq_norm(params.bully) + kernels::sq_norm(params.victim) + kernels::sq_norm(params.word);
  double consistency = 0.0;
  for (MessageIndex m = 0; m < corpus.num_interactions(); ++m) {
    const double social = params.bully[corpus.sender(m)] + params.victim[corpus.receiver(m)];
    consistency += kernels::gather_sq_dev(params.word, corpus.features(m), social);
  }
  return 0.5 * params.lambda * ridge + 0.5 * consistency;
}

Gradient gradient(const ModelParams& params, const IndexedCorpus& corpus) {
  check_params(params, corpus);
  Gradient g;
  g.bully.resize(params.bully.size());
  g.victim.resize(params.victim.size());
  g.word.resize(params.word.size());
  for (std::size_t i = 0; i < g.bully.size(); ++i) g.bully[i] = params.lambda * params.bully[i];
  for (std::size_t i = 0; i < g.victim.size(); ++i) g.victim[i] = params.lambda * params.victim[i];
  for (std::size_t k = 0; k < g.word.size(); ++k) g.word[k] = params.lambda * params.word[k];
  for (MessageIndex m = 0; m < corpus.num_interactions(); ++m) {
    const auto s = corpus.sender(m);
    const auto r = corpus.receiver(m);
    const double social = params.bully[s] + params.victim[r];
    for (auto k : corpus.features(m)) {
      const double resid = social - params.word[k];
      g.bully[s] += resid;
      g.victim[r] += resid;
      g.word[k] -= resid;
    }
  }
  return g;
}

std::vector<double> update_bully(const ModelParams& params, const IndexedCorpus& corpus) {
  check_params(params, corpus);
  const auto n = corpus.num_users();
  std::vector<double> num(n), den(n), out(n);
  for (UserId i = 0; i < n; ++i)
    accumulate_user_block(params, corpus, corpus.sent_by(i), params.victim,
                          [&](MessageIndex m) { return corpus.receiver(m); }, num[i], den[i]);
  kernels::shrink_ratio(num, den, params.lambda, out);
  return out;
}

std::vector<double> update_victim(const ModelParams& params, const IndexedCorpus& corpus) {
  check_params(params, corpus);
  const auto n = corpus.num_users();
  std::vector<double> num(n), den(n), out(n);
  for (UserId j = 0; j < n; ++j)
    accumulate_user_block(params, corpus, corpus.received_by(j), params.bully,
                          [&](MessageIndex m) { return corpus.sender(m); }, num[j], den[j]);
  kernels::shrink_ratio(num, den, params.lambda, out);
  return out;
}

std::vector<double> update_vocab(const ModelParams& params, const IndexedCorpus& corpus, std::span<const FeatureId> seeds) {
  check_params(params, corpus);
  const auto mask = seed_mask(corpus, seeds);

  std::vector<double> social(corpus.num_interactions());
  for (MessageIndex m = 0; m < social.size(); ++m)
    social[m] = params.bully[corpus.sender(m)] + params.victim[corpus.receiver(m)];

  const auto n = corpus.num_features();
  std::vector<double> num(n), den(n), out(n);
  for (FeatureId k = 0; k < n; ++k) {
    const auto rows = corpus.containing(k);
    num[k] = kernels::gather_sum(social, rows);
    den[k] = static_cast<double>(rows.size());
  }
  kernels::shrink_ratio(num, den, params.lambda, out);
  for (FeatureId k = 0; k < n; ++k)
    if (mask[k]) out[k] = 1.0;
  return out;
}

FitResult fit(const IndexedCorpus& corpus, std::span<const FeatureId> seeds, const SolverConfig& config,
              const FitObserver& observer) {
  if (seeds.empty()) throw InputError("seed set is empty; the model has no supervision");
  if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(config.tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  const auto mask = seed_mask(corpus, seeds);

  FitResult result;
  auto& p = result.params;
  p = ModelParams::zeros(corpus, config.lambda);
  for (FeatureId k = 0; k < corpus.num_features(); ++k)
    if (mask[k]) p.word[k] = 1.0;

  auto& trace = result.trace;
  double prev = objective(p, corpus);
  trace.initial_objective = prev;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    auto bully = update_bully(p, corpus);
    p.bully.swap(bully);
    auto victim = update_victim(p, corpus);
    p.victim.swap(victim);
    auto word = update_vocab(p, corpus, seeds);
    p.word.swap(word);
    // bully/victim/word now hold the previous iterate.
    const double step = std::max({max_abs_diff(p.bully, bully), max_abs_diff(p.victim, victim), max_abs_diff(p.word, word)});
    const double scale = std::max({1.0, max_abs(p.bully), max_abs(p.victim), max_abs(p.word)});

    const double cur = objective(p, corpus);
    trace.objective.push_back(cur);
    trace.iterations = iter;
    if (observer) observer(iter, p);
    if ((prev - cur) / std::max(prev, kObjectiveFloor) < config.tol && step / scale < config.tol) {
      trace.converged = true;
      break;
    }
    prev = cur;
  }
  return result;
}

ModelParams solve_exact(const IndexedCorpus& corpus, std::span<const FeatureId> seeds, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const auto mask = seed_mask(corpus, seeds);
  const auto n_users = corpus.num_users();
  const auto n_features = corpus.num_features();

  // Free coordinates: [b | v | non-seed w].
  std::vector<long> word_slot(n_features, -1);
  long n_free = static_cast<long>(2 * n_users);
  for (FeatureId k = 0; k < n_features; ++k)
    if (!mask[k]) word_slot[k] = n_free++;
  if (static_cast<std::size_t>(n_free) > kMaxExactCoordinates)
    throw InputError("instance has " + std::to_string(n_free) + " free coordinates; solve_exact accepts at most " +
                     std::to_string(kMaxExactCoordinates) + ", use fit instead");

  // Each (m, k) term is 1/2 (a.x - c)^2 with a = e_b(s) + e_v(r) - e_w(k)
  // over free coordinates and c = 1 when k is a seed, 0 otherwise.
  Eigen::MatrixXd hessian = Eigen::MatrixXd::Identity(n_free, n_free) * lambda;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_free);
  for (MessageIndex m = 0; m < corpus.num_interactions(); ++m) {
    const long bs = corpus.sender(m);
    const long vr = static_cast<long>(n_users) + corpus.receiver(m);
    for (auto k : corpus.features(m)) {
      hessian(bs, bs) += 1.0;
      hessian(vr, vr) += 1.0;
      hessian(bs, vr) += 1.0;
      hessian(vr, bs) += 1.0;
      if (mask[k]) {
        rhs(bs) += 1.0;
        rhs(vr) += 1.0;
      } else {
        const long wk = word_slot[k];
        hessian(wk, wk) += 1.0;
        hessian(bs, wk) -= 1.0;
        hessian(wk, bs) -= 1.0;
        hessian(vr, wk) -= 1.0;
        hessian(wk, vr) -= 1.0;
      }
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success) throw std::runtime_error("normal equations are not positive definite");
  const Eigen::VectorXd x = llt.solve(rhs);

  ModelParams p = ModelParams::zeros(corpus, lambda);
  for (std::size_t i = 0; i < n_users; ++i) {
    p.bully[i] = x(static_cast<long>(i));
    p.victim[i] = x(static_cast<long>(n_users + i));
  }
  for (FeatureId k = 0; k < n_features; ++k) p.word[k] = mask[k] ? 1.0 : x(word_slot[k]);
  return p;
}

}  // namespace pvc
