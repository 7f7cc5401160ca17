// Copyright 2026 The parafilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Add-k smoothed n-gram language model over a closed vocabulary.
//
//   p(w | h) = (c(h, w) + k) / (c(h) + k * V)
//
// where h is the (order-1)-word history, c(h) is the total count of events
// observed after h, and V is the number of predictable types: every
// vocabulary word plus </s> and <unk> (the start symbol <s> only ever appears
// in histories). Unseen histories therefore get the uniform distribution 1/V.
//
// Sentences are padded with order-1 <s> symbols on the left and a single </s>
// on the right; the </s> event is part of every sentence's probability.
// All logarithms are natural.

#ifndef PARAFILTER_NGRAM_LM_HPP_
#define PARAFILTER_NGRAM_LM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parafilter/corpus.hpp"
#include "parafilter/string_map.hpp"

namespace parafilter {

using WordId = std::uint32_t;

class Vocabulary {
 public:
  static constexpr WordId kUnk = 0;
  static constexpr WordId kEnd = 1;
  static constexpr WordId kStart = 2;
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kEndToken = "</s>";
  static constexpr std::string_view kStartToken = "<s>";

  // Reserved tokens only.
  Vocabulary();
  // Reserved tokens followed by words (in the given order, duplicates and
  // reserved spellings ignored).
  explicit Vocabulary(const std::vector<std::string>& words);

  // Unknown words and the literal spellings <s> and </s> map to <unk>.
  WordId lookup(std::string_view word) const;
  const std::string& word(WordId id) const { return words_[id]; }
  // Includes the reserved tokens.
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  StringMap<WordId> index_;
};

struct NgramOptions {
  int order = 3;
  double add_k = 0.1;
  std::uint64_t min_count = 2;
};

class NgramLanguageModel {
 public:
  // Builds a model from a word list and raw n-gram counts. Each n-gram is
  // given as exactly `order` tokens; history positions may hold <s>.
  // Throws TrainingError on invalid arguments.
  static NgramLanguageModel from_counts(
      int order, double add_k, std::uint64_t min_count,
      const std::vector<std::string>& words,
      const std::vector<std::pair<std::vector<std::string>, std::uint64_t>>& counts);

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  std::uint64_t min_count() const { return min_count_; }
  const Vocabulary& vocab() const { return vocab_; }
  // Number of predictable types V (vocabulary minus <s>).
  std::size_t predicted_size() const { return vocab_.size() - 1; }

  // history must hold exactly order-1 ids.
  double prob(std::span<const WordId> history, WordId word) const;

  std::uint64_t ngram_count(std::span<const WordId> ngram) const;
  std::uint64_t history_count(std::span<const WordId> history) const;

  // Stored n-grams in ascending id order; used for serialization.
  std::vector<std::pair<std::vector<WordId>, std::uint64_t>> sorted_ngrams() const;

 private:
  friend class NgramTrainer;
  NgramLanguageModel(int order, double add_k, std::uint64_t min_count, Vocabulary vocab);
  void add_ngram(std::span<const WordId> ngram, std::uint64_t count);

  int order_;
  double add_k_;
  std::uint64_t min_count_;
  Vocabulary vocab_;
  StringMap<std::uint64_t> ngrams_;
  StringMap<std::uint64_t> histories_;
};

// Incremental trainer: feed sentences once, then finish(). Words seen fewer
// than min_count times are folded into <unk> at finish time, so a single pass
// over the data is enough.
class NgramTrainer {
 public:
  explicit NgramTrainer(NgramOptions options);

  // Blank sentences are skipped.
  void add(const Sentence& sentence);
  std::size_t sentences() const { return sentences_; }

  // Throws TrainingError if no non-blank sentence was added.
  NgramLanguageModel finish() const;

 private:
  NgramOptions options_;
  std::size_t sentences_ = 0;
  StringMap<WordId> provisional_;
  std::vector<std::string> provisional_words_;
  std::vector<std::uint64_t> word_counts_;
  StringMap<std::uint64_t> ngrams_;  // keyed by provisional ids
};

NgramLanguageModel train_ngram(std::span<const Sentence> sentences, NgramOptions options);

// -(1/(|s|+1)) * [sum_t ln p(s_t | h_t) + ln p(</s> | h)], in nats per token.
// Throws EmptySentenceError for a sentence without tokens.
double cross_entropy(const NgramLanguageModel& lm, const Sentence& sentence);
double cross_entropy(const NgramLanguageModel& lm, std::span<const std::string> tokens);

// exp(cross_entropy).
double perplexity(const NgramLanguageModel& lm, const Sentence& sentence);

// Plain-text model file, version 1:
//
//   parafilter-ngram-lm<TAB>1
//   order<TAB>3
//   add_k<TAB>0.1
//   min_count<TAB>2
//   vocab<TAB>N            followed by N lines, one word each, in id order
//   ngrams<TAB>M           followed by M lines "w1 w2 w3<TAB>count"
//   end
//
// Counts and k are stored exactly, so a loaded model reproduces every
// probability of the saved one bit for bit.
void save_lm(const NgramLanguageModel& lm, const std::filesystem::path& path);
NgramLanguageModel load_lm(const std::filesystem::path& path);

}  // namespace parafilter

#endif  // PARAFILTER_NGRAM_LM_HPP_
