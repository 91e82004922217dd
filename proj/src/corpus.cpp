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

#include "pvc/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pvc/error.hpp"

namespace pvc {

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '*' ||
         c == '_' || c == '\'' || c >= 0x80;
}

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

NgramOrders::NgramOrders(std::initializer_list<int> orders) {
  for (int o : orders) add(o);
}

void NgramOrders::add(int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("n-gram order must be 1, 2 or 3, got " + std::to_string(order));
  mask_ |= 1u << order;
}

NgramOrders NgramOrders::parse(std::string_view list) {
  NgramOrders orders;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    auto item = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item.size() != 1 || item[0] < '1' || item[0] > '3')
      throw InputError("invalid n-gram order list '" + std::string(list) + "' (expected e.g. 1,2)");
    orders.add(item[0] - '0');
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return orders;
}

std::string NgramOrders::to_string() const {
  std::string out;
  for (int o = 1; o <= 3; ++o) {
    if (!contains(o)) continue;
    if (!out.empty()) out += ',';
    out += static_cast<char>('0' + o);
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_byte(c)) {
      current += lower(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text, const NgramOrders& orders) {
  const auto tokens = split_tokens(text);
  std::vector<std::string> grams;
  for (int n = 1; n <= 3; ++n) {
    if (!orders.contains(n) || tokens.size() < static_cast<std::size_t>(n)) continue;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int j = 1; j < n; ++j) {
        gram += ' ';
        gram += tokens[i + j];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

std::string normalize_phrase(std::string_view text) {
  std::string out;
  for (const auto& tok : split_tokens(text)) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

Lexicon::Lexicon(const std::vector<std::string>& phrases) {
  for (const auto& p : phrases) add(p);
}

bool Lexicon::add(std::string_view phrase) {
  auto norm = normalize_phrase(phrase);
  if (norm.empty() || index_.count(norm)) return false;
  index_.emplace(norm, phrases_.size());
  phrases_.push_back(std::move(norm));
  return true;
}

bool Lexicon::contains(std::string_view normalized) const { return index_.count(std::string(normalized)) > 0; }

std::vector<Message> load_messages(std::istream& in) {
  std::vector<Message> messages;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fail = [&](const std::string& reason) {
      throw InputError("message file line " + std::to_string(lineno) + ": " + reason);
    };
    auto fields = split_fields(line);
    if (fields.size() < 4) fail("expected 4 tab-separated fields (id, sender, receiver, text), got " + std::to_string(fields.size()));
    if (fields.size() > 4) fail("text field contains a tab");
    if (fields[0].empty()) fail("empty message id");
    if (fields[1].empty()) fail("empty sender");
    if (fields[2].empty()) fail("empty receiver");
    Message msg{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), std::string(fields[3])};
    auto [it, inserted] = seen.emplace(msg.id, lineno);
    if (!inserted) fail("duplicate message id '" + msg.id + "' (first seen on line " + std::to_string(it->second) + ")");
    messages.push_back(std::move(msg));
  }
  return messages;
}

void write_messages(std::ostream& out, std::span<const Message> messages) {
  for (const auto& m : messages) out << m.id << '\t' << m.sender << '\t' << m.receiver << '\t' << m.text << '\n';
}

Lexicon load_lexicon(std::istream& in) {
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) lex.add(line);
  return lex;
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  for (const auto& p : lexicon.phrases()) out << p << '\n';
}

LexiconSplit split_lexicon(const Lexicon& lex, double seed_fraction, std::uint64_t rng_seed) {
  if (lex.empty()) throw InputError("cannot split an empty lexicon");
  if (!(seed_fraction > 0.0 && seed_fraction < 1.0)) throw std::invalid_argument("seed_fraction must lie in (0, 1)");

  const auto n = lex.size();
  const auto n_seed = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(seed_fraction * static_cast<double>(n))));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<bool> in_seed(n, false);
  for (std::size_t i = 0; i < std::min(n_seed, n); ++i) in_seed[order[i]] = true;

  LexiconSplit split;
  for (std::size_t i = 0; i < n; ++i) (in_seed[i] ? split.seed : split.target).add(lex.phrases()[i]);
  return split;
}

IndexedCorpus IndexedCorpus::from_parts(std::vector<std::string> phrases, std::vector<std::string> users,
                                        std::vector<Interaction> interactions) {
  IndexedCorpus c;
  c.phrases_ = std::move(phrases);
  c.users_ = std::move(users);
  for (std::size_t k = 0; k < c.phrases_.size(); ++k)
    if (!c.phrase_ids_.emplace(c.phrases_[k], static_cast<FeatureId>(k)).second)
      throw std::invalid_argument("duplicate phrase '" + c.phrases_[k] + "'");
  for (std::size_t u = 0; u < c.users_.size(); ++u)
    if (!c.user_ids_.emplace(c.users_[u], static_cast<UserId>(u)).second)
      throw std::invalid_argument("duplicate user '" + c.users_[u] + "'");

  for (auto& it : interactions) {
    if (it.sender >= c.users_.size() || it.receiver >= c.users_.size())
      throw std::invalid_argument("interaction references unknown user id");
    std::sort(it.features.begin(), it.features.end());
    it.features.erase(std::unique(it.features.begin(), it.features.end()), it.features.end());
    if (it.features.empty()) continue;
    if (it.features.back() >= c.phrases_.size()) throw std::invalid_argument("interaction references unknown feature id");
    c.message_ids_.push_back(std::move(it.message_id));
    c.senders_.push_back(it.sender);
    c.receivers_.push_back(it.receiver);
    c.feature_ids_.insert(c.feature_ids_.end(), it.features.begin(), it.features.end());
    c.feature_offsets_.push_back(c.feature_ids_.size());
  }
  c.build_indices();
  return c;
}

void IndexedCorpus::build_indices() {
  const auto n_msg = num_interactions();
  auto fill = [n_msg](Postings& p, std::size_t rows, auto&& keys_of) {
    std::vector<std::size_t> counts(rows + 1, 0);
    for (MessageIndex m = 0; m < n_msg; ++m)
      for (auto key : keys_of(m)) ++counts[key + 1];
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    p.offsets = counts;
    p.items.assign(counts.back(), 0);
    for (MessageIndex m = 0; m < n_msg; ++m)
      for (auto key : keys_of(m)) p.items[counts[key]++] = m;
  };
  fill(by_sender_, users_.size(), [this](MessageIndex m) { return std::array<UserId, 1>{senders_[m]}; });
  fill(by_receiver_, users_.size(), [this](MessageIndex m) { return std::array<UserId, 1>{receivers_[m]}; });
  fill(by_feature_, phrases_.size(), [this](MessageIndex m) { return features(m); });
}

std::optional<FeatureId> IndexedCorpus::find_phrase(std::string_view phrase) const {
  auto it = phrase_ids_.find(std::string(phrase));
  if (it == phrase_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<UserId> IndexedCorpus::find_user(std::string_view name) const {
  auto it = user_ids_.find(std::string(name));
  if (it == user_ids_.end()) return std::nullopt;
  return it->second;
}

IndexedCorpus build_corpus(std::span<const Message> messages, const NgramOrders& orders, int min_df) {
  if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");

  // First pass: distinct phrases per message, in first-occurrence order.
  std::vector<std::string> all_phrases;
  std::unordered_map<std::string, FeatureId> provisional;
  std::vector<int> df;
  std::vector<std::vector<FeatureId>> per_message(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    for (auto& gram : tokenize(messages[i].text, orders)) {
      auto [it, inserted] = provisional.emplace(gram, static_cast<FeatureId>(all_phrases.size()));
      if (inserted) {
        all_phrases.push_back(std::move(gram));
        df.push_back(0);
      }
      auto& row = per_message[i];
      if (std::find(row.begin(), row.end(), it->second) == row.end()) {
        row.push_back(it->second);
        ++df[it->second];
      }
    }
  }

  // Second pass: renumber survivors in first-occurrence order and intern users.
  constexpr auto kDropped = static_cast<FeatureId>(-1);
  std::vector<FeatureId> remap(all_phrases.size(), kDropped);
  std::vector<std::string> phrases;
  std::vector<std::string> users;
  std::unordered_map<std::string, UserId> user_ids;
  auto intern_user = [&](const std::string& name) {
    auto [it, inserted] = user_ids.emplace(name, static_cast<UserId>(users.size()));
    if (inserted) users.push_back(name);
    return it->second;
  };

  std::vector<Interaction> interactions;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    Interaction it;
    for (auto k : per_message[i]) {
      if (df[k] < min_df) continue;
      if (remap[k] == kDropped) {
        remap[k] = static_cast<FeatureId>(phrases.size());
        phrases.push_back(all_phrases[k]);
      }
      it.features.push_back(remap[k]);
    }
    if (it.features.empty()) continue;
    it.message_id = messages[i].id;
    it.sender = intern_user(messages[i].sender);
    it.receiver = intern_user(messages[i].receiver);
    interactions.push_back(std::move(it));
  }
  return IndexedCorpus::from_parts(std::move(phrases), std::move(users), std::move(interactions));
}

ResolvedPhrases resolve_phrases(const IndexedCorpus& corpus, const Lexicon& lexicon) {
  ResolvedPhrases out;
  for (const auto& p : lexicon.phrases()) {
    if (auto id = corpus.find_phrase(p))
      out.ids.push_back(*id);
    else
      out.missing.push_back(p);
  }
  return out;
}

}  // namespace pvc
