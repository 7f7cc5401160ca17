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

// Synthetic corruption of clean bitext and intrinsic evaluation of how well a
// score separates clean pairs from corrupted ones.

#ifndef PARAFILTER_NOISE_HPP_
#define PARAFILTER_NOISE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parafilter/corpus.hpp"
#include "parafilter/scoring.hpp"

namespace parafilter {

enum class CorruptionKind : std::uint8_t {
  kMisalign,       // target taken from a different pair
  kCopySource,     // target replaced by the source sentence
  kShuffle,        // target tokens permuted
  kTruncate,       // target cut to a prefix of at most half its tokens
  kWrongLanguage,  // target replaced by a sentence in a third language
};
inline constexpr std::size_t kCorruptionKinds = 5;

std::string_view to_string(CorruptionKind kind);
std::optional<CorruptionKind> parse_corruption_kind(std::string_view text);

struct NoiseSpec {
  double rate = 0.2;
  // Indexed by CorruptionKind.
  std::array<double, kCorruptionKinds> mix{0.2, 0.2, 0.2, 0.2, 0.2};
  std::uint64_t seed = 1;

  // Throws ConfigError unless rate is in [0, 1], mix entries are non-negative
  // and sum to 1 within 1e-9.
  void validate() const;
};

// "uniform", or comma-separated "kind=weight" entries over misalign, copy,
// shuffle, truncate and wrong-language. Unlisted kinds get weight 0.
std::array<double, kCorruptionKinds> parse_mix(std::string_view text);
std::string format_mix(const std::array<double, kCorruptionKinds>& mix);

struct Label {
  std::size_t id = 0;
  std::optional<CorruptionKind> corruption;  // nullopt: clean

  bool clean() const { return !corruption.has_value(); }
};

struct LabeledPair {
  SentencePair pair;
  Label label;
};

// Corrupts exactly round(rate * n) pairs. Which pairs are hit, their kinds and
// the corruption details are all derived from (seed, pair id), so the result
// does not depend on processing order. Throws ConfigError if the corpus has
// fewer than 10 pairs, if rate > 0 rounds to zero corrupted pairs, or if
// wrong-language corruption has positive weight but third_language is empty.
std::vector<LabeledPair> inject_noise(std::span<const SentencePair> clean,
                                      const NoiseSpec& spec,
                                      std::span<const Sentence> third_language = {});

// Labels file: TSV with header "id<TAB>label<TAB>kind", label clean or
// corrupted, kind "-" for clean pairs.
void write_labels(std::span<const LabeledPair> pairs, const std::filesystem::path& path);
std::vector<Label> read_labels(const std::filesystem::path& path);

struct KindSummary {
  std::size_t count = 0;
  double mean_combined = 0;
};

struct FilterReport {
  std::size_t pairs = 0;
  std::size_t clean = 0;
  std::size_t corrupted = 0;
  std::size_t k = 0;  // the clean count
  double precision_at_k = 0;
  double recall_at_k = 0;
  double auc_combined = 0;
  double auc_adq = 0;
  double auc_dom = 0;
  double mean_combined_clean = 0;
  std::array<KindSummary, kCorruptionKinds> by_kind{};
};

// Area under the ROC curve of score against the positive label, via the
// Mann-Whitney statistic with ties counted as one half. NaN if either class
// is empty.
double roc_auc(std::span<const double> scores, std::span<const bool> positive);

// Ranks by combined score (descending, ties by id) and compares the top-k,
// k = number of clean pairs, with the labels. Positive class is Clean.
// Unscored adq/dom fields count as 0. Throws StructuralError if the id sets
// of records and labels differ.
FilterReport evaluate_filter(std::span<const ScoreRecord> records, std::span<const Label> labels);

// "metric<TAB>value" lines.
void write_report(const FilterReport& report, const std::filesystem::path& path);

}  // namespace parafilter

#endif  // PARAFILTER_NOISE_HPP_
