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

// Streaming ingestion of monolingual and parallel text. Input is UTF-8, one
// sentence per line, either as twin files (source and target) or as a
// two-column TSV. Tokenization is whitespace splitting with optional
// lowercasing; anything fancier is the caller's preprocessing.

#ifndef PARAFILTER_CORPUS_HPP_
#define PARAFILTER_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parafilter/io.hpp"

namespace parafilter {

inline constexpr std::size_t kDefaultMaxTokens = 250;

struct Sentence {
  std::string raw;
  std::vector<std::string> tokens;

  bool blank() const { return tokens.empty(); }
};

enum class Provenance : std::uint8_t { kCandidate, kTrusted };

struct SentencePair {
  std::size_t id = 0;
  Sentence src;
  Sentence tgt;
  Provenance provenance = Provenance::kCandidate;

  bool trusted() const { return provenance == Provenance::kTrusted; }
  bool blank() const { return src.blank() || tgt.blank(); }
  bool overlong(std::size_t max_tokens) const {
    return src.tokens.size() > max_tokens || tgt.tokens.size() > max_tokens;
  }
};

// Throws DecodingError naming the byte offset of the first invalid sequence.
void validate_utf8(std::string_view text);

// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters.
// Other code points pass through unchanged. Input must be valid UTF-8.
std::string lowercase_utf8(std::string_view text);

// Splits on maximal runs of ASCII whitespace (space, \t, \n, \v, \f, \r).
Sentence tokenize(std::string_view line, bool lowercase);

struct ReadOptions {
  bool lowercase = false;
  Provenance provenance = Provenance::kCandidate;
};

// Single-pass reader over a parallel corpus. Single consumer; not thread safe.
// For twin files on regular files, line counts are compared up front; for
// non-seekable inputs the mismatch is reported when one side runs out.
class CorpusStream {
 public:
  // Twin-file mode.
  static CorpusStream open(const std::filesystem::path& src_path,
                           const std::filesystem::path& tgt_path,
                           ReadOptions options = {});
  // TSV mode: each line is "source<TAB>target".
  static CorpusStream open_tsv(const std::filesystem::path& tsv_path,
                               ReadOptions options = {});

  CorpusStream(CorpusStream&&) noexcept;
  CorpusStream& operator=(CorpusStream&&) noexcept;
  ~CorpusStream();

  std::optional<SentencePair> next();
  // Pairs yielded so far.
  std::size_t count() const { return count_; }

 private:
  CorpusStream(std::unique_ptr<LineReader> first,
               std::unique_ptr<LineReader> second, ReadOptions options);

  std::unique_ptr<LineReader> first_;
  std::unique_ptr<LineReader> second_;  // null in TSV mode
  ReadOptions options_;
  std::size_t count_ = 0;
  std::string line_a_;
  std::string line_b_;
};

// Reads everything remaining in the stream.
std::vector<SentencePair> read_all(CorpusStream& stream);

// Monolingual input: one sentence per line.
std::vector<Sentence> read_sentences(const std::filesystem::path& path,
                                     bool lowercase = false);

// Uniform reservoir sample of min(n, corpus size) pairs, deterministic for a
// fixed seed, returned in ascending id order.
std::vector<SentencePair> sample(CorpusStream& stream, std::size_t n,
                                 std::uint64_t seed);

// Writes raw lines back out; the output re-reads to identical pairs.
void write_parallel(const std::vector<SentencePair>& pairs,
                    const std::filesystem::path& src_path,
                    const std::filesystem::path& tgt_path);
void write_tsv(const std::vector<SentencePair>& pairs,
               const std::filesystem::path& tsv_path);

}  // namespace parafilter

#endif  // PARAFILTER_CORPUS_HPP_
