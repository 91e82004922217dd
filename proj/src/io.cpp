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

#include "pvc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "pvc/error.hpp"

namespace pvc {

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, end);
  if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
    throw InputError("not a finite number: '" + std::string(text) + "'");
  return value;
}

std::vector<ScoreRow> word_rows(std::span<const double> scores, const std::vector<std::string>& phrases) {
  std::vector<ScoreRow> rows;
  rows.reserve(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) rows.push_back({"word", phrases.at(k), scores[k]});
  return rows;
}

std::vector<ScoreRow> model_rows(const ModelParams& params, const IndexedCorpus& corpus) {
  check_params(params, corpus);
  auto rows = word_rows(params.word, corpus.phrases());
  for (UserId u = 0; u < corpus.num_users(); ++u) {
    rows.push_back({"bully", corpus.user(u), params.bully[u]});
    rows.push_back({"victim", corpus.user(u), params.victim[u]});
  }
  return rows;
}

void write_score_table(std::ostream& out, std::vector<ScoreRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
  for (const auto& r : rows) out << r.kind << '\t' << r.name << '\t' << format_double(r.score) << '\n';
}

std::vector<ScoreRow> read_score_table(std::istream& in) {
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos)
      throw InputError("score table line " + std::to_string(lineno) + ": expected kind<TAB>name<TAB>score");
    ScoreRow row{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), 0.0};
    if (row.kind != "bully" && row.kind != "victim" && row.kind != "word")
      throw InputError("score table line " + std::to_string(lineno) + ": unknown kind '" + row.kind + "'");
    try {
      row.score = parse_double(std::string_view(line).substr(t2 + 1));
    } catch (const InputError& e) {
      throw InputError("score table line " + std::to_string(lineno) + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_trace(std::ostream& out, const FitTrace& trace) {
  for (std::size_t i = 0; i < trace.objective.size(); ++i) out << (i + 1) << '\t' << format_double(trace.objective[i]) << '\n';
}

void write_roc(std::ostream& out, const RocResult& roc) {
  for (const auto& p : roc.points) out << format_double(p.fpr) << '\t' << format_double(p.tpr) << '\n';
  out << "# auc = " << format_double(roc.auc) << '\n';
}

}  // namespace pvc
