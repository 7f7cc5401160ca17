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

#include "parafilter/corpus.hpp"

#include <algorithm>

#include "parafilter/error.hpp"
#include "parafilter/random.hpp"

namespace parafilter {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

// Decodes one code point starting at text[pos]; returns its length in bytes
// or 0 if the sequence is invalid.
std::size_t decode_utf8(std::string_view text, std::size_t pos, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 32;
  if (c >= 0x100 && c <= 0x137) return c | 1;
  if (c >= 0x139 && c <= 0x148) return (c & 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return c | 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c & 1) ? c + 1 : c;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 37;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 63;
  if (c >= 0x391 && c <= 0x3A9) return c == 0x3A2 ? c : c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  return c;
}

}  // namespace

void validate_utf8(std::string_view text) {
  std::size_t pos = 0;
  char32_t cp;
  while (pos < text.size()) {
    const auto len = decode_utf8(text, pos, cp);
    if (len == 0) {
      throw DecodingError("invalid UTF-8 at byte offset " + std::to_string(pos), pos);
    }
    pos += len;
  }
}

std::string lowercase_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  char32_t cp;
  while (pos < text.size()) {
    const auto len = decode_utf8(text, pos, cp);
    if (len == 0) {
      throw DecodingError("invalid UTF-8 at byte offset " + std::to_string(pos), pos);
    }
    if (len == 1) {
      out.push_back(static_cast<char>(to_lower(cp)));
    } else {
      encode_utf8(to_lower(cp), out);
    }
    pos += len;
  }
  return out;
}

Sentence tokenize(std::string_view line, bool lowercase) {
  validate_utf8(line);
  Sentence s;
  s.raw.assign(line);
  const std::string lowered = lowercase ? lowercase_utf8(line) : std::string();
  const std::string_view text = lowercase ? std::string_view(lowered) : line;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) s.tokens.emplace_back(text.substr(start, i - start));
  }
  return s;
}

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

void reject_bom(const std::string& line, const LineReader& reader) {
  if (reader.line_number() == 1 && line.compare(0, kBom.size(), kBom) == 0) {
    throw FormatError(reader.path().string() + ":1: byte-order mark is not supported", 1);
  }
}

Sentence tokenize_at(const std::string& line, bool lowercase, const LineReader& reader) {
  try {
    return tokenize(line, lowercase);
  } catch (const DecodingError& e) {
    throw DecodingError(reader.path().string() + ":" +
                            std::to_string(reader.line_number()) + ": " + e.what(),
                        e.offset());
  }
}

}  // namespace

CorpusStream::CorpusStream(std::unique_ptr<LineReader> first,
                           std::unique_ptr<LineReader> second, ReadOptions options)
    : first_(std::move(first)), second_(std::move(second)), options_(options) {}

CorpusStream::CorpusStream(CorpusStream&&) noexcept = default;
CorpusStream& CorpusStream::operator=(CorpusStream&&) noexcept = default;
CorpusStream::~CorpusStream() = default;

CorpusStream CorpusStream::open(const std::filesystem::path& src_path,
                                const std::filesystem::path& tgt_path,
                                ReadOptions options) {
  if (std::filesystem::is_regular_file(src_path) &&
      std::filesystem::is_regular_file(tgt_path)) {
    const auto n_src = count_lines(src_path);
    const auto n_tgt = count_lines(tgt_path);
    if (n_src != n_tgt) {
      throw StructuralError("line-count mismatch: " + src_path.string() + " has " +
                            std::to_string(n_src) + " lines, " + tgt_path.string() +
                            " has " + std::to_string(n_tgt) + "; first divergent line " +
                            std::to_string(std::min(n_src, n_tgt) + 1));
    }
  }
  return CorpusStream(std::make_unique<LineReader>(src_path),
                      std::make_unique<LineReader>(tgt_path), options);
}

CorpusStream CorpusStream::open_tsv(const std::filesystem::path& tsv_path,
                                    ReadOptions options) {
  return CorpusStream(std::make_unique<LineReader>(tsv_path), nullptr, options);
}

std::optional<SentencePair> CorpusStream::next() {
  SentencePair pair;
  if (second_) {
    const bool has_a = first_->next(line_a_);
    const bool has_b = second_->next(line_b_);
    if (!has_a && !has_b) return std::nullopt;
    if (has_a != has_b) {
      const auto line = count_ + 1;
      throw StructuralError("line-count mismatch: " +
                            (has_a ? second_ : first_)->path().string() +
                            " ends before line " + std::to_string(line));
    }
    reject_bom(line_a_, *first_);
    reject_bom(line_b_, *second_);
    pair.src = tokenize_at(line_a_, options_.lowercase, *first_);
    pair.tgt = tokenize_at(line_b_, options_.lowercase, *second_);
  } else {
    if (!first_->next(line_a_)) return std::nullopt;
    reject_bom(line_a_, *first_);
    const auto fields = split_fields(line_a_, '\t');
    if (fields.size() != 2) {
      const auto n = first_->line_number();
      throw FormatError(first_->path().string() + ":" + std::to_string(n) +
                            ": expected 2 tab-separated columns, found " +
                            std::to_string(fields.size()),
                        n);
    }
    pair.src = tokenize_at(std::string(fields[0]), options_.lowercase, *first_);
    pair.tgt = tokenize_at(std::string(fields[1]), options_.lowercase, *first_);
  }
  pair.id = count_++;
  pair.provenance = options_.provenance;
  return pair;
}

std::vector<SentencePair> read_all(CorpusStream& stream) {
  std::vector<SentencePair> pairs;
  while (auto p = stream.next()) pairs.push_back(std::move(*p));
  return pairs;
}

std::vector<Sentence> read_sentences(const std::filesystem::path& path, bool lowercase) {
  LineReader reader(path);
  std::vector<Sentence> out;
  std::string line;
  while (reader.next(line)) {
    reject_bom(line, reader);
    out.push_back(tokenize_at(line, lowercase, reader));
  }
  return out;
}

std::vector<SentencePair> sample(CorpusStream& stream, std::size_t n, std::uint64_t seed) {
  std::vector<SentencePair> reservoir;
  if (n == 0) {
    while (stream.next()) {
    }
    return reservoir;
  }
  reservoir.reserve(n);
  Rng rng(seed);
  std::size_t seen = 0;
  while (auto p = stream.next()) {
    ++seen;
    if (reservoir.size() < n) {
      reservoir.push_back(std::move(*p));
    } else {
      const auto j = uniform_below(rng, seen);
      if (j < n) reservoir[j] = std::move(*p);
    }
  }
  std::sort(reservoir.begin(), reservoir.end(),
            [](const SentencePair& a, const SentencePair& b) { return a.id < b.id; });
  return reservoir;
}

void write_parallel(const std::vector<SentencePair>& pairs,
                    const std::filesystem::path& src_path,
                    const std::filesystem::path& tgt_path) {
  AtomicOutput src(src_path);
  AtomicOutput tgt(tgt_path);
  for (const auto& p : pairs) {
    src.stream() << p.src.raw << '\n';
    tgt.stream() << p.tgt.raw << '\n';
  }
  src.commit();
  tgt.commit();
}

void write_tsv(const std::vector<SentencePair>& pairs, const std::filesystem::path& tsv_path) {
  AtomicOutput out(tsv_path);
  for (const auto& p : pairs) out.stream() << p.src.raw << '\t' << p.tgt.raw << '\n';
  out.commit();
}

}  // namespace parafilter
