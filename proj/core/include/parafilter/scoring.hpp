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

// Sentence-pair scores built from four cross-entropies (nats per token):
//
//   h_fwd  H(y | x) under the forward translation model
//   h_rev  H(x | y) under the reverse translation model
//   h_in   H(y) under the in-domain language model
//   h_out  H(y) under the general (noisy-domain) language model
//
//   dual     = |h_fwd - h_rev| + (h_fwd + h_rev) / 2        0 is best
//   adq      = exp(-dual)                                   1 for trusted pairs
//   dom      = min(exp(-(h_in - h_out)), 1)
//   combined = adq * dom
//
// dom is a perplexity quotient PP_out(y) / PP_in(y) clipped from above at 1,
// so a strong in-domain signal never outweighs bilingual adequacy.

#ifndef PARAFILTER_SCORING_HPP_
#define PARAFILTER_SCORING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "parafilter/corpus.hpp"
#include "parafilter/lexical_tm.hpp"
#include "parafilter/ngram_lm.hpp"
#include "parafilter/scorer.hpp"

namespace parafilter {

// Throws DomainError for negative or non-finite input.
double dual_score(double h_fwd, double h_rev);
double adequacy(double h_fwd, double h_rev);
// Throws DomainError for non-finite input.
double domain_score(double h_in, double h_out);
// Throws DomainError unless adq and dom are in (0, 1].
double combined_score(double adq, double dom, bool trusted);

enum ScoreFlag : std::uint8_t {
  kFlagNone = 0,
  kFlagTrusted = 1 << 0,
  kFlagBlank = 1 << 1,
  kFlagOverlong = 1 << 2,
};

// Comma-separated flag names ("trusted,blank"), "-" when none are set.
std::string flags_to_string(std::uint8_t flags);
std::uint8_t parse_flags(std::string_view text);

struct ScoreRecord {
  std::size_t id = 0;
  double h_fwd = 0;
  double h_rev = 0;
  double h_in = 0;
  double h_out = 0;
  double adq = 0;
  double dom = 0;
  double combined = 0;
  std::uint8_t flags = kFlagNone;

  bool trusted() const { return flags & kFlagTrusted; }
  // Blank or overlong pairs are not scored; their combined score is 0 and
  // the cross-entropy fields are NaN.
  bool rejected() const { return flags & (kFlagBlank | kFlagOverlong); }
};

// Computes adq, dom and combined from the four cross-entropies already set on
// the record.
void finalize_record(ScoreRecord& record);

// H(tgt | src) or H(src | tgt) from a lexical translation model, chosen by
// the model's direction.
class TranslationScorer : public PairScorer {
 public:
  explicit TranslationScorer(const LexicalTranslationModel& tm) : tm_(tm) {}
  double cross_entropy(const SentencePair& pair) const override;

 private:
  const LexicalTranslationModel& tm_;
};

// H(tgt) from an n-gram language model; the source side is ignored.
class TargetLanguageModelScorer : public PairScorer {
 public:
  explicit TargetLanguageModelScorer(const NgramLanguageModel& lm) : lm_(lm) {}
  double cross_entropy(const SentencePair& pair) const override;

 private:
  const NgramLanguageModel& lm_;
};

struct Scorers {
  const PairScorer* fwd = nullptr;
  const PairScorer* rev = nullptr;
  const PairScorer* in_domain = nullptr;
  const PairScorer* out_domain = nullptr;
};

struct ScoringOptions {
  std::size_t max_tokens = kDefaultMaxTokens;
  // 0 means std::thread::hardware_concurrency().
  std::size_t workers = 1;
  std::size_t batch_size = 8192;
};

// Scores a single pair. Scorer exceptions are rethrown as ScoringError with
// the pair id.
ScoreRecord score_pair(const SentencePair& pair, const Scorers& scorers,
                       std::size_t max_tokens);

// Scores every pair of the stream and hands records to sink in ascending id
// order. Batches are split across worker threads; the output does not depend
// on the worker count.
void score_corpus(CorpusStream& corpus, const Scorers& scorers, const ScoringOptions& options,
                  const std::function<void(const ScoreRecord&)>& sink);

std::vector<ScoreRecord> score_corpus(CorpusStream& corpus, const Scorers& scorers,
                                      const ScoringOptions& options);

// Score file: TSV with the header
//   id h_fwd h_rev h_in h_out adq dom combined flags
// and floats printed with six significant digits (NA for unscored fields).
inline constexpr std::string_view kScoreHeader =
    "id\th_fwd\th_rev\th_in\th_out\tadq\tdom\tcombined\tflags";

std::string format_record(const ScoreRecord& record);

class ScoreWriter {
 public:
  explicit ScoreWriter(const std::filesystem::path& path);
  void write(const ScoreRecord& record);
  void commit() { out_.commit(); }

 private:
  AtomicOutput out_;
};

// Streaming reader; throws ParseError with the line number on malformed
// input.
class ScoreReader {
 public:
  explicit ScoreReader(const std::filesystem::path& path);
  std::optional<ScoreRecord> next();

 private:
  LineReader reader_;
  std::string line_;
};

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);

}  // namespace parafilter

#endif  // PARAFILTER_SCORING_HPP_
