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

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>
#include <span>

namespace pvc {

using UserId = std::uint32_t;
using FeatureId = std::uint32_t;
using MessageIndex = std::uint32_t;

struct Message {
  std::string id;
  std::string sender;
  std::string receiver;
  std::string text;

  bool operator==(const Message&) const = default;
};

/// Set of n-gram orders drawn from {1, 2, 3}.
class NgramOrders {
 public:
  NgramOrders() = default;
  NgramOrders(std::initializer_list<int> orders);

  /// Parses a comma list such as "1,2". Throws InputError on anything else.
  static NgramOrders parse(std::string_view list);

  void add(int order);
  bool contains(int order) const { return order >= 1 && order <= 3 && (mask_ >> order) & 1u; }
  bool empty() const { return mask_ == 0; }
  std::string to_string() const;

 private:
  unsigned mask_ = 0;
};

/// Lowercases ASCII and splits on every byte outside the token alphabet
/// (ASCII alphanumerics, '*', '_', '\'', and any byte >= 0x80).
std::vector<std::string> split_tokens(std::string_view text);

/// All contiguous n-grams of the requested orders, shortest order first,
/// left to right within each order, duplicates preserved.
std::vector<std::string> tokenize(std::string_view text, const NgramOrders& orders);

/// Canonical form of a lexicon phrase: tokens joined by single spaces.
std::string normalize_phrase(std::string_view text);

/// Ordered, duplicate-free set of normalized phrases.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::string>& phrases);

  /// Normalizes and appends; returns false for blanks and duplicates.
  bool add(std::string_view phrase);
  bool contains(std::string_view normalized) const;

  const std::vector<std::string>& phrases() const { return phrases_; }
  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }

 private:
  std::vector<std::string> phrases_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads `id<TAB>sender<TAB>receiver<TAB>text` records. Throws InputError
/// naming the 1-based line number for malformed lines and duplicate ids.
std::vector<Message> load_messages(std::istream& in);
void write_messages(std::ostream& out, std::span<const Message> messages);

Lexicon load_lexicon(std::istream& in);
void write_lexicon(std::ostream& out, const Lexicon& lexicon);

struct LexiconSplit {
  Lexicon seed;
  Lexicon target;
};

/// Random partition with |seed| = max(1, round(seed_fraction * |lex|)).
/// Both halves keep the input order.
LexiconSplit split_lexicon(const Lexicon& lex, double seed_fraction, std::uint64_t rng_seed);

/// One message reduced to ids. `features` is sorted ascending and distinct.
struct Interaction {
  std::string message_id;
  UserId sender = 0;
  UserId receiver = 0;
  std::vector<FeatureId> features;
};

/// Immutable interned corpus: vocabulary, users, per-message feature sets
/// (compressed rows) and the sender/receiver/feature inverted indices.
class IndexedCorpus {
 public:
  IndexedCorpus() = default;

  /// Assembles a corpus from already-interned parts. Feature lists are
  /// deduplicated and sorted; interactions with no features are dropped.
  /// Throws std::invalid_argument on out-of-range ids or duplicate names.
  static IndexedCorpus from_parts(std::vector<std::string> phrases,
                                  std::vector<std::string> users,
                                  std::vector<Interaction> interactions);

  std::size_t num_users() const { return users_.size(); }
  std::size_t num_features() const { return phrases_.size(); }
  std::size_t num_interactions() const { return senders_.size(); }

  const std::string& phrase(FeatureId k) const { return phrases_.at(k); }
  const std::string& user(UserId u) const { return users_.at(u); }
  const std::vector<std::string>& phrases() const { return phrases_; }
  const std::vector<std::string>& users() const { return users_; }
  std::optional<FeatureId> find_phrase(std::string_view phrase) const;
  std::optional<UserId> find_user(std::string_view name) const;

  const std::string& message_id(MessageIndex m) const { return message_ids_[m]; }
  UserId sender(MessageIndex m) const { return senders_[m]; }
  UserId receiver(MessageIndex m) const { return receivers_[m]; }
  std::span<const FeatureId> features(MessageIndex m) const {
    return {feature_ids_.data() + feature_offsets_[m], feature_offsets_[m + 1] - feature_offsets_[m]};
  }

  std::span<const MessageIndex> sent_by(UserId u) const { return by_sender_.row(u); }
  std::span<const MessageIndex> received_by(UserId u) const { return by_receiver_.row(u); }
  std::span<const MessageIndex> containing(FeatureId k) const { return by_feature_.row(k); }

 private:
  struct Postings {
    std::vector<std::size_t> offsets;
    std::vector<MessageIndex> items;
    std::span<const MessageIndex> row(std::size_t r) const {
      return {items.data() + offsets[r], offsets[r + 1] - offsets[r]};
    }
  };

  void build_indices();

  std::vector<std::string> phrases_;
  std::vector<std::string> users_;
  std::unordered_map<std::string, FeatureId> phrase_ids_;
  std::unordered_map<std::string, UserId> user_ids_;

  std::vector<std::string> message_ids_;
  std::vector<UserId> senders_;
  std::vector<UserId> receivers_;
  std::vector<std::size_t> feature_offsets_{0};
  std::vector<FeatureId> feature_ids_;

  Postings by_sender_;
  Postings by_receiver_;
  Postings by_feature_;
};

/// Tokenizes every message, keeps features with document frequency >=
/// min_df and drops messages left without features. Ids follow first
/// occurrence order.
IndexedCorpus build_corpus(std::span<const Message> messages, const NgramOrders& orders, int min_df = 1);

struct ResolvedPhrases {
  std::vector<FeatureId> ids;
  std::vector<std::string> missing;
};

/// Maps lexicon phrases to feature ids, collecting those not in the vocabulary.
ResolvedPhrases resolve_phrases(const IndexedCorpus& corpus, const Lexicon& lexicon);

}  // namespace pvc
