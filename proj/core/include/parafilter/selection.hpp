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

// Ranking, top-N and threshold selection, instance-weight files and
// extraction of the selected pairs.
//
// Ranking is by combined score, descending; equal scores are ordered by
// ascending id. The rank order is a total order on (score, id), so any
// sharding or spilling strategy produces the same result.

#ifndef PARAFILTER_SELECTION_HPP_
#define PARAFILTER_SELECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "parafilter/corpus.hpp"
#include "parafilter/scoring.hpp"

namespace parafilter {

struct RankKey {
  double score;
  std::uint64_t id;
};

// True if a ranks strictly before b.
inline bool ranks_before(const RankKey& a, const RankKey& b) {
  return a.score != b.score ? a.score > b.score : a.id < b.id;
}

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{4} << 30;

// Sorts RankKeys in rank order. Keys are buffered up to the memory budget;
// each full buffer is sorted and spilled to a temporary run file, and the
// runs are k-way merged on read. Temporary files are removed on destruction.
class ExternalSorter {
 public:
  explicit ExternalSorter(std::size_t memory_budget_bytes = kDefaultMemoryBudget,
                          std::filesystem::path temp_dir = {});
  ExternalSorter(const ExternalSorter&) = delete;
  ExternalSorter& operator=(const ExternalSorter&) = delete;
  ~ExternalSorter();

  void add(const RankKey& key);
  std::size_t size() const { return size_; }
  std::size_t spilled_runs() const { return runs_.size(); }

  // Visits keys in rank order until visit returns false. Call once.
  void for_each(const std::function<bool(const RankKey&)>& visit);

 private:
  void spill();

  std::size_t capacity_;
  std::filesystem::path temp_dir_;
  std::vector<RankKey> buffer_;
  std::vector<std::filesystem::path> runs_;
  std::size_t size_ = 0;
};

struct SelectionOptions {
  std::size_t memory_budget = kDefaultMemoryBudget;
  std::filesystem::path temp_dir;  // empty: system temp directory
};

struct SelectionResult {
  std::vector<std::size_t> ids;         // ascending
  std::optional<double> cutoff_score;   // combined score of the last selected pair
  std::optional<std::size_t> n_requested;  // top-N mode only
  std::size_t n_returned = 0;
  std::size_t n_total = 0;              // records considered
};

// Pull-style record source; returns nullopt when exhausted.
using RecordSource = std::function<std::optional<ScoreRecord>()>;

RecordSource records_of(std::span<const ScoreRecord> records);
RecordSource records_of(ScoreReader& reader);

SelectionResult select_top_n(const RecordSource& records, std::size_t n,
                             const SelectionOptions& options = {});
SelectionResult select_top_n(std::span<const ScoreRecord> records, std::size_t n,
                             const SelectionOptions& options = {});

// Every record with combined >= threshold. Throws DomainError unless
// threshold is in [0, 1].
SelectionResult select_by_threshold(const RecordSource& records, double threshold);
SelectionResult select_by_threshold(std::span<const ScoreRecord> records, double threshold);

// One weight per line, line i holding the combined score of pair i, printed
// with six significant digits ("1", "0.25"). Records may arrive in any order
// but must cover ids 0..corpus_size-1 exactly once; otherwise a
// StructuralError names the first missing or duplicate id.
void emit_weights(const RecordSource& records, std::size_t corpus_size,
                  const std::filesystem::path& path);
void emit_weights(std::span<const ScoreRecord> records, std::size_t corpus_size,
                  const std::filesystem::path& path);

struct AlignmentDigest {
  std::size_t lines = 0;
  std::uint64_t digest = 0;  // FNV-1a over "weight<TAB>src<TAB>tgt<LF>" lines
};

// Walks a weight file and a corpus in lockstep. Throws StructuralError if
// their line counts differ or a weight is not a number in [0, 1].
AlignmentDigest check_weight_alignment(const std::filesystem::path& weights,
                                       CorpusStream& corpus);

struct ExtractPaths {
  // Either tsv, or both src and tgt.
  std::filesystem::path src;
  std::filesystem::path tgt;
  std::filesystem::path tsv;
};

// Copies exactly the selected pairs, in corpus order, in a single pass.
// Throws StructuralError if a selected id lies beyond the end of the corpus.
void extract_selected(CorpusStream& corpus, const SelectionResult& selection,
                      const ExtractPaths& out);

}  // namespace parafilter

#endif  // PARAFILTER_SELECTION_HPP_
