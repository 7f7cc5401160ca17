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

// IBM Model 1 lexical translation tables trained with EM, and the conditional
// cross-entropy they induce:
//
//   P(y_t | x) = 1/(|x| + null) * sum_s t(y_t | x_s)
//   H(y | x)   = -1/|y| * sum_t ln max(P(y_t | x), 1e-9)
//
// A forward model conditions targets on sources; a reverse model is trained
// on the same pairs with the roles swapped.

#ifndef PARAFILTER_LEXICAL_TM_HPP_
#define PARAFILTER_LEXICAL_TM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parafilter/corpus.hpp"
#include "parafilter/scorer.hpp"
#include "parafilter/string_map.hpp"

namespace parafilter {

inline constexpr double kProbabilityFloor = 1e-9;

enum class Direction : std::uint8_t { kForward, kReverse };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);  // "fwd" or "rev"

struct Model1Options {
  int iterations = 5;
  bool use_null = true;
  Direction direction = Direction::kForward;
  // Stop early once an iteration gains less than this many nats per training
  // pair; 0 runs every iteration.
  double min_gain_per_pair = 1e-6;
};

// Corpus log-likelihood after each EM iteration.
struct EmTrace {
  std::vector<double> log_likelihood;

  bool non_decreasing(double tolerance) const;
};

class LexicalTranslationModel {
 public:
  static constexpr std::string_view kNullToken = "<null>";

  LexicalTranslationModel(bool use_null, Direction direction);

  bool use_null() const { return use_null_; }
  Direction direction() const { return direction_; }

  // t(target | source); 0 for unseen combinations. source may be kNullToken.
  double prob(std::string_view source, std::string_view target) const;
  void set_prob(std::string_view source, std::string_view target, double p);

  std::size_t entries() const { return table_.size(); }
  std::size_t source_types() const { return src_words_.size(); }

  struct Entry {
    std::string source;
    std::string target;
    double prob;
  };
  // Sorted by (source, target).
  std::vector<Entry> sorted_entries() const;

  // Sum of t(. | source) over the stored targets.
  double row_sum(std::string_view source) const;

  // -1/|y| sum_t ln max(P(y_t|x), 1e-9). Throws EmptySentenceError when y is
  // empty, EmptySourceError when x is empty and NULL is off. The result does
  // not depend on the order of tokens in x or y.
  double cond_cross_entropy(std::span<const std::string> x,
                            std::span<const std::string> y) const;

 private:
  friend class Model1Trainer;
  static constexpr std::uint32_t kNoWord = 0xFFFFFFFFu;
  static std::uint64_t key(std::uint32_t s, std::uint32_t t) {
    return (static_cast<std::uint64_t>(s) << 32) | t;
  }
  std::uint32_t source_id(std::string_view w) const;
  std::uint32_t target_id(std::string_view w) const;
  std::uint32_t intern_source(std::string_view w);
  std::uint32_t intern_target(std::string_view w);

  bool use_null_;
  Direction direction_;
  StringMap<std::uint32_t> src_index_;
  StringMap<std::uint32_t> tgt_index_;
  std::vector<std::string> src_words_;
  std::vector<std::string> tgt_words_;
  std::unordered_map<std::uint64_t, double> table_;
};

double cond_cross_entropy(const LexicalTranslationModel& tm, const Sentence& x,
                          const Sentence& y);

struct Model1Result {
  LexicalTranslationModel model;
  EmTrace trace;
};

// Trains on the pairs (src -> tgt for kForward, tgt -> src for kReverse).
// Pairs with an empty target side, or an empty source side when NULL is off,
// are skipped. Throws TrainingError if nothing is left or iterations < 1.
Model1Result train_model1(std::span<const SentencePair> corpus, const Model1Options& options);

// Versioned TSV:
//
//   parafilter-lexical-tm<TAB>1
//   direction<TAB>fwd|rev
//   null<TAB>0|1
//   entries<TAB>N          followed by N lines "source<TAB>target<TAB>prob"
//   end
void save_tm(const LexicalTranslationModel& tm, const std::filesystem::path& path);
LexicalTranslationModel load_tm(const std::filesystem::path& path);

// Cross-entropies computed outside the toolkit, e.g. by neural translation
// models: TSV lines "id<TAB>H" with H in nats per token, normalized by the
// whitespace token count plus one end-of-sentence event. An optional first
// line "id<TAB>..." is treated as a header.
class ExternalScores : public PairScorer {
 public:
  static ExternalScores load(const std::filesystem::path& path);
  explicit ExternalScores(std::vector<double> values) : values_(std::move(values)) {}

  // Throws MissingIdError for ids not in the file.
  double lookup(std::size_t id) const;
  double cross_entropy(const SentencePair& pair) const override { return lookup(pair.id); }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;  // NaN marks ids absent from the file
};

inline ExternalScores load_external_scores(const std::filesystem::path& path) {
  return ExternalScores::load(path);
}

}  // namespace parafilter

#endif  // PARAFILTER_LEXICAL_TM_HPP_
