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

#include "parafilter/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "parafilter/error.hpp"
#include "parafilter/parallel.hpp"

namespace parafilter {

namespace {

void check_entropy(double h, const char* name) {
  if (!std::isfinite(h) || h < 0) {
    throw DomainError(std::string(name) + " must be finite and non-negative, got " +
                      format_score(h));
  }
}

}  // namespace

double dual_score(double h_fwd, double h_rev) {
  check_entropy(h_fwd, "h_fwd");
  check_entropy(h_rev, "h_rev");
  return std::abs(h_fwd - h_rev) + 0.5 * (h_fwd + h_rev);
}

// Huge external cross-entropies would underflow to 0; keep scores strictly
// positive so every pair stays comparable.
double adequacy(double h_fwd, double h_rev) {
  return std::max(std::exp(-dual_score(h_fwd, h_rev)), std::numeric_limits<double>::min());
}

double domain_score(double h_in, double h_out) {
  if (!std::isfinite(h_in) || !std::isfinite(h_out)) {
    throw DomainError("domain score needs finite cross-entropies");
  }
  return std::clamp(std::exp(-(h_in - h_out)), std::numeric_limits<double>::min(), 1.0);
}

double combined_score(double adq, double dom, bool trusted) {
  if (!(adq > 0 && adq <= 1) || !(dom > 0 && dom <= 1)) {
    throw DomainError("adequacy and domain scores must lie in (0, 1]");
  }
  return (trusted ? 1.0 : adq) * dom;
}

std::string flags_to_string(std::uint8_t flags) {
  std::string out;
  auto add = [&](std::uint8_t bit, const char* name) {
    if (!(flags & bit)) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(kFlagTrusted, "trusted");
  add(kFlagBlank, "blank");
  add(kFlagOverlong, "overlong");
  return out.empty() ? "-" : out;
}

std::uint8_t parse_flags(std::string_view text) {
  if (text == "-") return kFlagNone;
  std::uint8_t flags = kFlagNone;
  for (auto name : split_fields(text, ',')) {
    if (name == "trusted") {
      flags |= kFlagTrusted;
    } else if (name == "blank") {
      flags |= kFlagBlank;
    } else if (name == "overlong") {
      flags |= kFlagOverlong;
    } else {
      throw FormatError("unknown flag '" + std::string(name) + "'", 0);
    }
  }
  return flags;
}

void finalize_record(ScoreRecord& r) {
  const bool trusted = r.trusted();
  r.adq = trusted ? 1.0 : adequacy(r.h_fwd, r.h_rev);
  r.dom = domain_score(r.h_in, r.h_out);
  r.combined = combined_score(r.adq, r.dom, trusted);
}

double TranslationScorer::cross_entropy(const SentencePair& pair) const {
  if (tm_.direction() == Direction::kForward) {
    return tm_.cond_cross_entropy(pair.src.tokens, pair.tgt.tokens);
  }
  return tm_.cond_cross_entropy(pair.tgt.tokens, pair.src.tokens);
}

double TargetLanguageModelScorer::cross_entropy(const SentencePair& pair) const {
  return parafilter::cross_entropy(lm_, pair.tgt);
}

ScoreRecord score_pair(const SentencePair& pair, const Scorers& scorers,
                       std::size_t max_tokens) {
  ScoreRecord r;
  r.id = pair.id;
  if (pair.trusted()) r.flags |= kFlagTrusted;
  if (pair.blank()) r.flags |= kFlagBlank;
  if (pair.overlong(max_tokens)) r.flags |= kFlagOverlong;
  if (r.rejected()) {
    const double na = std::nan("");
    r.h_fwd = r.h_rev = r.h_in = r.h_out = r.adq = r.dom = na;
    r.combined = 0.0;
    return r;
  }
  try {
    r.h_fwd = scorers.fwd->cross_entropy(pair);
    r.h_rev = scorers.rev->cross_entropy(pair);
    r.h_in = scorers.in_domain->cross_entropy(pair);
    r.h_out = scorers.out_domain->cross_entropy(pair);
    finalize_record(r);
  } catch (const std::exception& e) {
    throw ScoringError("scoring pair " + std::to_string(pair.id) + " failed: " + e.what(),
                       pair.id);
  }
  return r;
}

void score_corpus(CorpusStream& corpus, const Scorers& scorers, const ScoringOptions& options,
                  const std::function<void(const ScoreRecord&)>& sink) {
  if (!scorers.fwd || !scorers.rev || !scorers.in_domain || !scorers.out_domain) {
    throw ConfigError("score_corpus needs all four scorers");
  }
  const std::size_t workers = resolve_workers(options.workers);
  const std::size_t batch_size = std::max<std::size_t>(options.batch_size, 1);
  std::vector<SentencePair> batch;
  std::vector<ScoreRecord> records;
  batch.reserve(batch_size);
  bool done = false;
  while (!done) {
    batch.clear();
    while (batch.size() < batch_size) {
      auto p = corpus.next();
      if (!p) {
        done = true;
        break;
      }
      batch.push_back(std::move(*p));
    }
    records.resize(batch.size());
    parallel_for(batch.size(), workers, [&](std::size_t i) {
      records[i] = score_pair(batch[i], scorers, options.max_tokens);
    });
    for (const auto& r : records) sink(r);
  }
}

std::vector<ScoreRecord> score_corpus(CorpusStream& corpus, const Scorers& scorers,
                                      const ScoringOptions& options) {
  std::vector<ScoreRecord> out;
  score_corpus(corpus, scorers, options, [&](const ScoreRecord& r) { out.push_back(r); });
  return out;
}

std::string format_record(const ScoreRecord& r) {
  std::string line = std::to_string(r.id);
  for (double v : {r.h_fwd, r.h_rev, r.h_in, r.h_out, r.adq, r.dom, r.combined}) {
    line += '\t';
    line += format_score(v);
  }
  line += '\t';
  line += flags_to_string(r.flags);
  return line;
}

ScoreWriter::ScoreWriter(const std::filesystem::path& path) : out_(path) {
  out_.stream() << kScoreHeader << '\n';
}

void ScoreWriter::write(const ScoreRecord& record) {
  out_.stream() << format_record(record) << '\n';
}

ScoreReader::ScoreReader(const std::filesystem::path& path) : reader_(path) {
  if (!reader_.next(line_)) {
    throw ParseError(path.string() + ": empty score file", 0);
  }
  if (line_ != kScoreHeader) {
    throw ParseError(path.string() + ":1: missing score file header", 1);
  }
}

std::optional<ScoreRecord> ScoreReader::next() {
  if (!reader_.next(line_)) return std::nullopt;
  const auto n = reader_.line_number();
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError(reader_.path().string() + ":" + std::to_string(n) + ": " + what, n);
  };
  const auto fields = split_fields(line_, '\t');
  if (fields.size() != 9) throw fail("expected 9 columns, found " + std::to_string(fields.size()));
  ScoreRecord r;
  const auto id = parse_uint(fields[0]);
  if (!id) throw fail("malformed id '" + std::string(fields[0]) + "'");
  r.id = *id;
  double* slots[] = {&r.h_fwd, &r.h_rev, &r.h_in, &r.h_out, &r.adq, &r.dom, &r.combined};
  for (std::size_t i = 0; i < 7; ++i) {
    const auto v = parse_double(fields[i + 1]);
    if (!v) throw fail("malformed number '" + std::string(fields[i + 1]) + "'");
    *slots[i] = *v;
  }
  if (std::isnan(r.combined)) throw fail("combined score may not be NA");
  try {
    r.flags = parse_flags(fields[8]);
  } catch (const FormatError& e) {
    throw fail(e.what());
  }
  return r;
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
  ScoreReader reader(path);
  std::vector<ScoreRecord> out;
  while (auto r = reader.next()) out.push_back(*r);
  return out;
}

}  // namespace parafilter
