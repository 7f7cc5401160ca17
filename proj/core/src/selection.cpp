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

#include "parafilter/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <queue>
#include <system_error>

#include <unistd.h>

#include "parafilter/error.hpp"

namespace parafilter {

namespace {

std::filesystem::path unique_run_path(const std::filesystem::path& dir) {
  static std::atomic<std::uint64_t> counter{0};
  return dir / ("parafilter-run-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1)) + ".bin");
}

class RunReader {
 public:
  explicit RunReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot reopen sort run " + path.string());
    buffer_.resize(kBufferKeys);
  }

  bool next(RankKey& key) {
    if (pos_ == end_) {
      in_.read(reinterpret_cast<char*>(buffer_.data()),
               static_cast<std::streamsize>(buffer_.size() * sizeof(RankKey)));
      end_ = static_cast<std::size_t>(in_.gcount()) / sizeof(RankKey);
      pos_ = 0;
      if (end_ == 0) return false;
    }
    key = buffer_[pos_++];
    return true;
  }

 private:
  static constexpr std::size_t kBufferKeys = 1 << 14;
  std::ifstream in_;
  std::vector<RankKey> buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
};

}  // namespace

ExternalSorter::ExternalSorter(std::size_t memory_budget_bytes, std::filesystem::path temp_dir)
    : capacity_(std::max<std::size_t>(memory_budget_bytes / sizeof(RankKey), 2)),
      temp_dir_(temp_dir.empty() ? std::filesystem::temp_directory_path()
                                 : std::move(temp_dir)) {}

ExternalSorter::~ExternalSorter() {
  for (const auto& run : runs_) {
    std::error_code ec;
    std::filesystem::remove(run, ec);
  }
}

void ExternalSorter::add(const RankKey& key) {
  if (buffer_.size() == capacity_) spill();
  buffer_.push_back(key);
  ++size_;
}

void ExternalSorter::spill() {
  std::sort(buffer_.begin(), buffer_.end(), ranks_before);
  auto path = unique_run_path(temp_dir_);
  runs_.push_back(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create sort run " + path.string());
  out.write(reinterpret_cast<const char*>(buffer_.data()),
            static_cast<std::streamsize>(buffer_.size() * sizeof(RankKey)));
  if (!out) throw IoError("write error on sort run " + path.string());
  buffer_.clear();
}

void ExternalSorter::for_each(const std::function<bool(const RankKey&)>& visit) {
  std::sort(buffer_.begin(), buffer_.end(), ranks_before);
  if (runs_.empty()) {
    for (const auto& k : buffer_) {
      if (!visit(k)) return;
    }
    return;
  }
  // The in-memory buffer is merged as one more run.
  std::vector<std::unique_ptr<RunReader>> readers;
  for (const auto& run : runs_) readers.push_back(std::make_unique<RunReader>(run));
  using Head = std::pair<RankKey, std::size_t>;
  auto after = [](const Head& a, const Head& b) { return ranks_before(b.first, a.first); };
  std::priority_queue<Head, std::vector<Head>, decltype(after)> heap(after);
  const std::size_t memory_run = readers.size();
  std::size_t memory_pos = 0;
  auto advance = [&](std::size_t source) {
    RankKey k;
    if (source == memory_run) {
      if (memory_pos < buffer_.size()) heap.emplace(buffer_[memory_pos++], source);
    } else if (readers[source]->next(k)) {
      heap.emplace(k, source);
    }
  };
  for (std::size_t s = 0; s <= memory_run; ++s) advance(s);
  while (!heap.empty()) {
    const auto [key, source] = heap.top();
    heap.pop();
    if (!visit(key)) return;
    advance(source);
  }
}

RecordSource records_of(std::span<const ScoreRecord> records) {
  return [records, i = std::size_t{0}]() mutable -> std::optional<ScoreRecord> {
    if (i == records.size()) return std::nullopt;
    return records[i++];
  };
}

RecordSource records_of(ScoreReader& reader) {
  return [&reader]() { return reader.next(); };
}

SelectionResult select_top_n(const RecordSource& records, std::size_t n,
                             const SelectionOptions& options) {
  ExternalSorter sorter(options.memory_budget, options.temp_dir);
  while (auto r = records()) sorter.add({r->combined, r->id});

  SelectionResult result;
  result.n_requested = n;
  result.n_total = sorter.size();
  if (n > 0) {
    result.ids.reserve(std::min(n, sorter.size()));
    sorter.for_each([&](const RankKey& k) {
      result.ids.push_back(k.id);
      result.cutoff_score = k.score;
      return result.ids.size() < n;
    });
  }
  std::sort(result.ids.begin(), result.ids.end());
  result.n_returned = result.ids.size();
  return result;
}

SelectionResult select_top_n(std::span<const ScoreRecord> records, std::size_t n,
                             const SelectionOptions& options) {
  return select_top_n(records_of(records), n, options);
}

SelectionResult select_by_threshold(const RecordSource& records, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw DomainError("selection threshold must lie in [0, 1]");
  }
  SelectionResult result;
  std::optional<RankKey> last;
  while (auto r = records()) {
    ++result.n_total;
    if (r->combined >= threshold) {
      result.ids.push_back(r->id);
      const RankKey k{r->combined, r->id};
      if (!last || ranks_before(*last, k)) last = k;
    }
  }
  if (last) result.cutoff_score = last->score;
  std::sort(result.ids.begin(), result.ids.end());
  result.n_returned = result.ids.size();
  return result;
}

SelectionResult select_by_threshold(std::span<const ScoreRecord> records, double threshold) {
  return select_by_threshold(records_of(records), threshold);
}

void emit_weights(const RecordSource& records, std::size_t corpus_size,
                  const std::filesystem::path& path) {
  std::vector<double> weights(corpus_size, std::nan(""));
  while (auto r = records()) {
    if (r->id >= corpus_size) {
      throw StructuralError("score record id " + std::to_string(r->id) +
                            " is beyond the corpus size " + std::to_string(corpus_size));
    }
    if (!std::isnan(weights[r->id])) {
      throw StructuralError("duplicate score record for id " + std::to_string(r->id));
    }
    if (!(r->combined >= 0.0 && r->combined <= 1.0)) {
      throw StructuralError("combined score of id " + std::to_string(r->id) +
                            " is outside [0, 1]");
    }
    weights[r->id] = r->combined;
  }
  for (std::size_t i = 0; i < corpus_size; ++i) {
    if (std::isnan(weights[i])) {
      throw StructuralError("no score record for id " + std::to_string(i));
    }
  }
  AtomicOutput out(path);
  for (double w : weights) out.stream() << format_score(w) << '\n';
  out.commit();
}

void emit_weights(std::span<const ScoreRecord> records, std::size_t corpus_size,
                  const std::filesystem::path& path) {
  emit_weights(records_of(records), corpus_size, path);
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv1a(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

}  // namespace

AlignmentDigest check_weight_alignment(const std::filesystem::path& weights,
                                       CorpusStream& corpus) {
  LineReader reader(weights);
  AlignmentDigest result;
  result.digest = kFnvOffset;
  std::string line;
  while (true) {
    const bool has_weight = reader.next(line);
    auto pair = corpus.next();
    if (!has_weight && !pair) break;
    if (has_weight != pair.has_value()) {
      throw StructuralError("weight file and corpus differ in length at line " +
                            std::to_string(result.lines + 1));
    }
    const auto w = parse_double(line);
    if (!w || !(*w >= 0.0 && *w <= 1.0)) {
      throw StructuralError(weights.string() + ":" + std::to_string(reader.line_number()) +
                            ": weight is not a number in [0, 1]");
    }
    fnv1a(result.digest, line);
    fnv1a(result.digest, "\t");
    fnv1a(result.digest, pair->src.raw);
    fnv1a(result.digest, "\t");
    fnv1a(result.digest, pair->tgt.raw);
    fnv1a(result.digest, "\n");
    ++result.lines;
  }
  return result;
}

void extract_selected(CorpusStream& corpus, const SelectionResult& selection,
                      const ExtractPaths& out) {
  if (!std::is_sorted(selection.ids.begin(), selection.ids.end())) {
    throw StructuralError("selected ids must be in ascending order");
  }
  const bool tsv = !out.tsv.empty();
  if (!tsv && (out.src.empty() || out.tgt.empty())) {
    throw ConfigError("extraction needs either a TSV path or both source and target paths");
  }
  std::optional<AtomicOutput> tsv_out, src_out, tgt_out;
  if (tsv) {
    tsv_out.emplace(out.tsv);
  } else {
    src_out.emplace(out.src);
    tgt_out.emplace(out.tgt);
  }
  std::size_t next = 0;
  while (next < selection.ids.size()) {
    auto pair = corpus.next();
    if (!pair) break;
    if (pair->id != selection.ids[next]) continue;
    if (tsv) {
      tsv_out->stream() << pair->src.raw << '\t' << pair->tgt.raw << '\n';
    } else {
      src_out->stream() << pair->src.raw << '\n';
      tgt_out->stream() << pair->tgt.raw << '\n';
    }
    // Duplicate ids in the selection are written once.
    while (next < selection.ids.size() && selection.ids[next] == pair->id) ++next;
  }
  if (next < selection.ids.size()) {
    throw StructuralError("selected id " + std::to_string(selection.ids[next]) +
                          " is beyond the end of the corpus (" +
                          std::to_string(corpus.count()) + " pairs)");
  }
  if (tsv) {
    tsv_out->commit();
  } else {
    src_out->commit();
    tgt_out->commit();
  }
}

}  // namespace parafilter
