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

#include "commands.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "manifest.hpp"
#include "pvc/baselines.hpp"
#include "pvc/corpus.hpp"
#include "pvc/error.hpp"
#include "pvc/eval.hpp"
#include "pvc/io.hpp"
#include "pvc/kernels.hpp"
#include "pvc/solver.hpp"
#include "pvc/synth.hpp"

namespace fs = std::filesystem;

namespace pvc::cli {

namespace {

struct CorpusInputs {
  std::string corpus_path;
  std::string seed_lexicon_path;
  std::string ngram_orders = "1,2";
  int min_df = 1;
};

struct TrainOptions {
  CorpusInputs in;
  SolverConfig solver;
  std::string out_dir;
};

struct BaselineOptions {
  CorpusInputs in;
  std::string method;
  DqeConfig dqe;
  std::string out_dir;
};

struct EvalOptions {
  std::string scores_path;
  std::string target_lexicon_path;
  std::string seed_lexicon_path;
  int k = 20;
  std::string out_dir;
};

struct SynthOptions {
  SynthConfig config;
  double seed_fraction = 0.5;
  std::string out_dir;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return in;
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir + "'");
  return dir;
}

template <class Fn>
fs::path write_output(RunManifest& manifest, const fs::path& dir, const std::string& name, Fn&& body) {
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  body(out);
  out.close();
  if (!out) throw InputError("failed writing '" + path.string() + "'");
  manifest.add_output(path);
  return path;
}

void warn(RunManifest& manifest, std::ostream& err, std::string message) {
  err << "warning: " << message << '\n';
  manifest.warn(std::move(message));
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
  return s;
}

// Shared front half of train/baseline: load, index and resolve seeds.
struct LoadedCorpus {
  IndexedCorpus corpus;
  ResolvedPhrases seeds;
};

LoadedCorpus load_corpus(const CorpusInputs& in, RunManifest& manifest, std::ostream& err) {
  const auto orders = NgramOrders::parse(in.ngram_orders);
  if (in.min_df < 1) throw InputError("--min-df must be >= 1");
  auto corpus_stream = open_input(in.corpus_path);
  auto seed_stream = open_input(in.seed_lexicon_path);
  const auto messages = load_messages(corpus_stream);
  const auto seed_lex = load_lexicon(seed_stream);
  manifest.add_input(in.corpus_path);
  manifest.add_input(in.seed_lexicon_path);

  auto& p = manifest.parameters();
  p["corpus"] = in.corpus_path;
  p["seed_lexicon"] = in.seed_lexicon_path;
  p["ngram_orders"] = orders.to_string();
  p["min_df"] = in.min_df;

  if (seed_lex.empty()) throw InputError("seed lexicon '" + in.seed_lexicon_path + "' has no phrases");
  LoadedCorpus loaded{build_corpus(messages, orders, in.min_df), {}};
  loaded.seeds = resolve_phrases(loaded.corpus, seed_lex);
  if (!loaded.seeds.missing.empty())
    warn(manifest, err,
         std::to_string(loaded.seeds.missing.size()) + " seed phrase(s) absent from the corpus: " + join(loaded.seeds.missing));
  return loaded;
}

int cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
  RunManifest manifest("train");
  auto loaded = load_corpus(opt.in, manifest, err);
  if (loaded.seeds.ids.empty()) throw InputError("no seed phrase occurs in the corpus");

  auto& p = manifest.parameters();
  p["lambda"] = opt.solver.lambda;
  p["max_iters"] = opt.solver.max_iters;
  p["tol"] = opt.solver.tol;
  p["out_dir"] = opt.out_dir;
  if (!(opt.solver.lambda > 0.0)) throw InputError("--lambda must be positive");
  if (opt.solver.max_iters < 1) throw InputError("--max-iters must be >= 1");
  if (!(opt.solver.tol >= 0.0)) throw InputError("--tol must be >= 0");

  const auto dir = prepare_out_dir(opt.out_dir);
  const auto result = fit(loaded.corpus, loaded.seeds.ids, opt.solver);
  write_output(manifest, dir, "scores.tsv", [&](std::ostream& o) { write_score_table(o, model_rows(result.params, loaded.corpus)); });
  write_output(manifest, dir, "trace.tsv", [&](std::ostream& o) { write_trace(o, result.trace); });
  p["iterations"] = result.trace.iterations;
  p["converged"] = result.trace.converged;
  if (!result.trace.converged)
    warn(manifest, err, "did not converge within " + std::to_string(opt.solver.max_iters) + " iterations");
  manifest.write(dir);
  out << "trained on " << loaded.corpus.num_interactions() << " messages, " << loaded.corpus.num_users() << " users, "
      << loaded.corpus.num_features() << " features; " << result.trace.iterations << " iterations, objective "
      << format_double(result.trace.objective.back()) << '\n';
  return kExitOk;
}

int cmd_baseline(const BaselineOptions& opt, std::ostream& out, std::ostream& err) {
  RunManifest manifest("baseline");
  auto loaded = load_corpus(opt.in, manifest, err);
  auto& p = manifest.parameters();
  p["method"] = opt.method;
  p["out_dir"] = opt.out_dir;
  if (loaded.seeds.ids.empty()) warn(manifest, err, "no seed phrase occurs in the corpus");

  const auto dir = prepare_out_dir(opt.out_dir);
  std::vector<double> scores;
  if (opt.method == "cooccur") {
    scores = cooccurrence_scores(loaded.corpus, loaded.seeds.ids);
  } else {
    p["dqe_k"] = opt.dqe.k;
    p["dqe_max_iters"] = opt.dqe.max_iters;
    if (opt.dqe.k < 1 || opt.dqe.max_iters < 1) throw InputError("--dqe-k and --dqe-max-iters must be >= 1");
    auto dqe = dqe_scores(loaded.corpus, loaded.seeds.ids, opt.dqe);
    p["dqe_iterations"] = dqe.iterations;
    p["dqe_stabilized"] = dqe.stabilized;
    if (dqe.degenerate) warn(manifest, err, "degenerate result: no message contains a keyword, all scores are zero");
    write_output(manifest, dir, "keywords.txt", [&](std::ostream& o) {
      for (auto k : dqe.keywords) o << loaded.corpus.phrase(k) << '\n';
    });
    scores = std::move(dqe.scores);
  }
  write_output(manifest, dir, "scores.tsv",
               [&](std::ostream& o) { write_score_table(o, word_rows(scores, loaded.corpus.phrases())); });
  manifest.write(dir);
  out << opt.method << " scored " << scores.size() << " features\n";
  return kExitOk;
}

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  RunManifest manifest("eval");
  auto& p = manifest.parameters();
  p["scores"] = opt.scores_path;
  p["target_lexicon"] = opt.target_lexicon_path;
  p["seed_lexicon"] = opt.seed_lexicon_path;
  p["k"] = opt.k;
  p["out_dir"] = opt.out_dir;
  if (opt.k < 1) throw InputError("--k must be >= 1");

  auto scores_stream = open_input(opt.scores_path);
  auto target_stream = open_input(opt.target_lexicon_path);
  const auto rows = read_score_table(scores_stream);
  const auto targets_lex = load_lexicon(target_stream);
  Lexicon seeds_lex;
  manifest.add_input(opt.scores_path);
  manifest.add_input(opt.target_lexicon_path);
  if (!opt.seed_lexicon_path.empty()) {
    auto seed_stream = open_input(opt.seed_lexicon_path);
    seeds_lex = load_lexicon(seed_stream);
    manifest.add_input(opt.seed_lexicon_path);
  }

  std::vector<std::string> names;
  std::vector<double> scores;
  std::unordered_map<std::string, FeatureId> ids;
  ModelParams users;
  std::vector<std::string> user_names;
  std::unordered_map<std::string, std::size_t> user_index;
  for (const auto& r : rows) {
    if (r.kind == "word") {
      if (!ids.emplace(r.name, static_cast<FeatureId>(names.size())).second)
        throw InputError("score table lists word '" + r.name + "' twice");
      names.push_back(r.name);
      scores.push_back(r.score);
      continue;
    }
    auto [it, inserted] = user_index.emplace(r.name, user_names.size());
    if (inserted) {
      user_names.push_back(r.name);
      users.bully.push_back(0.0);
      users.victim.push_back(0.0);
    }
    (r.kind == "bully" ? users.bully : users.victim)[it->second] = r.score;
  }

  std::vector<FeatureId> exclude, targets;
  for (const auto& s : seeds_lex.phrases())
    if (auto it = ids.find(s); it != ids.end()) exclude.push_back(it->second);
  std::size_t target_seed_overlap = 0;
  for (const auto& t : targets_lex.phrases()) {
    if (seeds_lex.contains(t)) {
      ++target_seed_overlap;
      continue;
    }
    if (auto it = ids.find(t); it != ids.end()) targets.push_back(it->second);
  }
  if (target_seed_overlap) warn(manifest, err, std::to_string(target_seed_overlap) + " target phrase(s) are also seeds; ignored");
  if (targets.empty()) throw DegenerateError("no target phrase appears among the scored words");
  p["n_targets"] = targets.size();
  p["n_excluded"] = exclude.size();

  const auto dir = prepare_out_dir(opt.out_dir);
  const auto roc = roc_curve(scores, targets, exclude);
  write_output(manifest, dir, "roc.tsv", [&](std::ostream& o) { write_roc(o, roc); });

  const auto summary = summarize(scores, targets, exclude);
  std::string lift_error;
  double lift_value = 0.0;
  try {
    lift_value = lift(scores, targets, exclude);
  } catch (const DegenerateError& e) {
    lift_error = e.what();
  }
  write_output(manifest, dir, "summary.tsv", [&](std::ostream& o) {
    o << "metric\tauc\t" << format_double(roc.auc) << '\n';
    if (lift_error.empty())
      o << "metric\tlift\t" << format_double(lift_value) << '\n';
    else
      o << "# lift: degenerate (" << lift_error << ")\n";
    o << "metric\ttarget_mean\t" << format_double(summary.target_mean) << '\n';
    o << "metric\tnontarget_mean\t" << format_double(summary.nontarget_mean) << '\n';
    o << "metric\toverall_mean\t" << format_double(summary.overall_mean) << '\n';
    o << "metric\toverall_std\t" << format_double(summary.overall_std) << '\n';
  });

  const auto k = static_cast<std::size_t>(opt.k);
  write_output(manifest, dir, "top_words.tsv", [&](std::ostream& o) {
    for (const auto& r : top_words(scores, names, k, exclude)) o << "word\t" << r.name << '\t' << format_double(r.score) << '\n';
  });
  if (!user_names.empty()) {
    users.word.clear();
    const auto ranking = rank_users(users, user_names, k);
    write_output(manifest, dir, "top_users.tsv", [&](std::ostream& o) {
      for (const auto& r : ranking.bullies) o << "bully\t" << r.name << '\t' << format_double(r.score) << '\n';
      for (const auto& r : ranking.victims) o << "victim\t" << r.name << '\t' << format_double(r.score) << '\n';
    });
  }

  out << "auc\t" << format_double(roc.auc) << '\n';
  if (!lift_error.empty()) {
    manifest.error("lift: " + lift_error);
    manifest.write(dir);
    err << "error: lift: " << lift_error << '\n';
    return kExitRuntime;
  }
  out << "lift\t" << format_double(lift_value) << '\n';
  manifest.write(dir);
  return kExitOk;
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream&) {
  RunManifest manifest("synth");
  const auto& c = opt.config;
  auto& p = manifest.parameters();
  p["n_users"] = c.n_users;
  p["n_words"] = c.n_words;
  p["n_bully_words"] = c.n_bully_words;
  p["n_messages"] = c.n_messages;
  p["bully_user_fraction"] = c.bully_user_fraction;
  p["score_noise"] = c.score_noise;
  p["rng_seed"] = c.rng_seed;
  p["seed_fraction"] = opt.seed_fraction;
  p["out_dir"] = opt.out_dir;
  if (!(opt.seed_fraction > 0.0 && opt.seed_fraction < 1.0)) throw InputError("--seed-fraction must lie in (0, 1)");
  c.validate();

  const auto world = generate(c);
  const auto split = split_lexicon(world.bully_words, opt.seed_fraction, c.rng_seed);
  const auto dir = prepare_out_dir(opt.out_dir);
  write_output(manifest, dir, "messages.tsv", [&](std::ostream& o) { write_messages(o, world.messages); });
  write_output(manifest, dir, "seeds.txt", [&](std::ostream& o) { write_lexicon(o, split.seed); });
  write_output(manifest, dir, "targets.txt", [&](std::ostream& o) { write_lexicon(o, split.target); });
  write_output(manifest, dir, "truth.tsv", [&](std::ostream& o) {
    auto rows = word_rows(world.true_w, world.words);
    for (std::size_t u = 0; u < world.users.size(); ++u) {
      rows.push_back({"bully", world.users[u], world.true_b[u]});
      rows.push_back({"victim", world.users[u], world.true_v[u]});
    }
    write_score_table(o, std::move(rows));
  });
  manifest.write(dir);
  out << "wrote " << world.messages.size() << " messages, " << split.seed.size() << " seed and " << split.target.size()
      << " target phrases to " << opt.out_dir << '\n';
  return kExitOk;
}

void add_corpus_inputs(CLI::App* sub, CorpusInputs& in) {
  sub->add_option("--corpus", in.corpus_path, "Message file (id<TAB>sender<TAB>receiver<TAB>text)")->required();
  sub->add_option("--seed-lexicon", in.seed_lexicon_path, "Seed phrases, one per line")->required();
  sub->add_option("--ngram-orders", in.ngram_orders, "Comma list of n-gram orders from {1,2,3}")->capture_default_str();
  sub->add_option("--min-df", in.min_df, "Minimum document frequency of a feature")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Participant-vocabulary consistency scoring of bullies, victims and bullying vocabulary"};
  app.require_subcommand(1);
  std::string kernel_name = "auto";
  app.add_option("--kernels", kernel_name, "Arithmetic kernels: auto, scalar or avx2")->capture_default_str();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Fit user and word scores from a corpus and seed lexicon");
  add_corpus_inputs(train_cmd, train.in);
  train_cmd->add_option("--lambda", train.solver.lambda, "Ridge weight")->capture_default_str();
  train_cmd->add_option("--max-iters", train.solver.max_iters, "Maximum ALS iterations")->capture_default_str();
  train_cmd->add_option("--tol", train.solver.tol, "Relative objective change stopping threshold")->capture_default_str();
  train_cmd->add_option("--out-dir", train.out_dir, "Output directory")->required();

  BaselineOptions base;
  auto* base_cmd = app.add_subcommand("baseline", "Score words with co-occurrence or dynamic query expansion");
  base_cmd->add_option("--method", base.method, "cooccur or dqe")->required()->check(CLI::IsMember({"cooccur", "dqe"}));
  add_corpus_inputs(base_cmd, base.in);
  base_cmd->add_option("--dqe-k", base.dqe.k, "Keywords kept per DQE round")->capture_default_str();
  base_cmd->add_option("--dqe-max-iters", base.dqe.max_iters, "Maximum DQE rounds")->capture_default_str();
  base_cmd->add_option("--out-dir", base.out_dir, "Output directory")->required();

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "ROC, lift and top-k rankings against a held-out target lexicon");
  eval_cmd->add_option("--scores", ev.scores_path, "Score table (kind<TAB>name<TAB>score)")->required();
  eval_cmd->add_option("--target-lexicon", ev.target_lexicon_path, "Held-out target phrases")->required();
  eval_cmd->add_option("--seed-lexicon", ev.seed_lexicon_path, "Seed phrases excluded from evaluation");
  eval_cmd->add_option("--k", ev.k, "Entries in the top-k tables")->capture_default_str();
  eval_cmd->add_option("--out-dir", ev.out_dir, "Output directory")->required();

  SynthOptions syn;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a corpus with planted bully, victim and word scores");
  synth_cmd->add_option("--n-users", syn.config.n_users)->capture_default_str();
  synth_cmd->add_option("--n-words", syn.config.n_words)->capture_default_str();
  synth_cmd->add_option("--n-bully-words", syn.config.n_bully_words)->capture_default_str();
  synth_cmd->add_option("--n-messages", syn.config.n_messages)->capture_default_str();
  synth_cmd->add_option("--bully-user-fraction", syn.config.bully_user_fraction)->capture_default_str();
  synth_cmd->add_option("--score-noise", syn.config.score_noise)->capture_default_str();
  synth_cmd->add_option("--rng-seed", syn.config.rng_seed)->capture_default_str();
  synth_cmd->add_option("--seed-fraction", syn.seed_fraction, "Share of planted words written as seeds")->capture_default_str();
  synth_cmd->add_option("--out-dir", syn.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    kernels::select(kernels::parse_isa(kernel_name));
    if (*train_cmd) return cmd_train(train, out, err);
    if (*base_cmd) return cmd_baseline(base, out, err);
    if (*eval_cmd) return cmd_eval(ev, out, err);
    return cmd_synth(syn, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace pvc::cli
