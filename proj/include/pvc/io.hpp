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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvc/corpus.hpp"
#include "pvc/eval.hpp"
#include "pvc/solver.hpp"

namespace pvc {

/// Shortest round-trip decimal form; integral values keep a ".0" suffix.
std::string format_double(double x);
/// Throws InputError unless `text` is entirely a finite decimal number.
double parse_double(std::string_view text);

struct ScoreRow {
  std::string kind;  // bully, victim or word
  std::string name;
  double score = 0.0;
  bool operator==(const ScoreRow&) const = default;
};

std::vector<ScoreRow> word_rows(std::span<const double> scores, const std::vector<std::string>& phrases);
/// bully, victim and word rows for a fitted model.
std::vector<ScoreRow> model_rows(const ModelParams& params, const IndexedCorpus& corpus);

/// `kind<TAB>name<TAB>score`, sorted by kind, then descending score, then name.
void write_score_table(std::ostream& out, std::vector<ScoreRow> rows);
std::vector<ScoreRow> read_score_table(std::istream& in);

/// `iter<TAB>objective`, one line per iteration.
void write_trace(std::ostream& out, const FitTrace& trace);

/// `fpr<TAB>tpr` lines followed by `# auc = <value>`.
void write_roc(std::ostream& out, const RocResult& roc);

}  // namespace pvc
