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

#include "parafilter/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "parafilter/error.hpp"
#include "parafilter/io.hpp"

namespace parafilter {

namespace {

constexpr std::string_view kMagic = "parafilter-ngram-lm";
constexpr int kFormatVersion = 1;
constexpr int kMaxOrder = 16;

// N-gram keys are the raw bytes of the id sequence.
std::string_view make_key(std::span<const WordId> ids, char* buf) {
  std::memcpy(buf, ids.data(), ids.size_bytes());
  return {buf, ids.size_bytes()};
}

std::vector<WordId> decode_key(std::string_view key) {
  std::vector<WordId> ids(key.size() / sizeof(WordId));
  std::memcpy(ids.data(), key.data(), key.size());
  return ids;
}

void check_options(int order, double add_k) {
  if (order < 1 || order > kMaxOrder) {
    throw TrainingError("n-gram order must be in [1, " + std::to_string(kMaxOrder) + "]");
  }
  if (!(add_k > 0) || !std::isfinite(add_k)) {
    throw TrainingError("add-k smoothing constant must be positive and finite");
  }
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  words_ = {std::string(kUnkToken), std::string(kEndToken), std::string(kStartToken)};
  for (WordId id = 0; id < words_.size(); ++id) index_.emplace(words_[id], id);
  for (const auto& w : words) {
    if (index_.contains(w)) continue;
    index_.emplace(w, static_cast<WordId>(words_.size()));
    words_.push_back(w);
  }
}

WordId Vocabulary::lookup(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end() || it->second == kStart || it->second == kEnd) return kUnk;
  return it->second;
}

NgramLanguageModel::NgramLanguageModel(int order, double add_k, std::uint64_t min_count,
                                       Vocabulary vocab)
    : order_(order), add_k_(add_k), min_count_(min_count), vocab_(std::move(vocab)) {}

void NgramLanguageModel::add_ngram(std::span<const WordId> ngram, std::uint64_t count) {
  char buf[kMaxOrder * sizeof(WordId)];
  const auto key = make_key(ngram, buf);
  auto it = ngrams_.find(key);
  if (it == ngrams_.end()) {
    ngrams_.emplace(std::string(key), count);
  } else {
    it->second += count;
  }
  const auto hkey = key.substr(0, key.size() - sizeof(WordId));
  auto hit = histories_.find(hkey);
  if (hit == histories_.end()) {
    histories_.emplace(std::string(hkey), count);
  } else {
    hit->second += count;
  }
}

NgramLanguageModel NgramLanguageModel::from_counts(
    int order, double add_k, std::uint64_t min_count, const std::vector<std::string>& words,
    const std::vector<std::pair<std::vector<std::string>, std::uint64_t>>& counts) {
  check_options(order, add_k);
  NgramLanguageModel lm(order, add_k, min_count, Vocabulary(words));
  std::vector<WordId> ids(static_cast<std::size_t>(order));
  for (const auto& [tokens, count] : counts) {
    if (tokens.size() != ids.size()) {
      throw TrainingError("n-gram of length " + std::to_string(tokens.size()) +
                          " in a model of order " + std::to_string(order));
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      const bool last = i + 1 == tokens.size();
      if (t == Vocabulary::kStartToken) {
        if (last) throw TrainingError("<s> cannot be predicted");
        ids[i] = Vocabulary::kStart;
      } else if (t == Vocabulary::kEndToken) {
        if (!last) throw TrainingError("</s> cannot appear in a history");
        ids[i] = Vocabulary::kEnd;
      } else {
        ids[i] = lm.vocab_.lookup(t);
        if (ids[i] == Vocabulary::kUnk && t != Vocabulary::kUnkToken) {
          throw TrainingError("n-gram word '" + t + "' is not in the vocabulary");
        }
      }
    }
    if (count > 0) lm.add_ngram(ids, count);
  }
  return lm;
}

double NgramLanguageModel::prob(std::span<const WordId> history, WordId word) const {
  char buf[kMaxOrder * sizeof(WordId)];
  std::memcpy(buf, history.data(), history.size_bytes());
  std::memcpy(buf + history.size_bytes(), &word, sizeof word);
  const std::string_view key(buf, history.size_bytes() + sizeof word);

  const auto hit = histories_.find(key.substr(0, history.size_bytes()));
  const double context = hit == histories_.end() ? 0.0 : static_cast<double>(hit->second);
  double joint = 0.0;
  if (context > 0) {
    const auto it = ngrams_.find(key);
    if (it != ngrams_.end()) joint = static_cast<double>(it->second);
  }
  return (joint + add_k_) / (context + add_k_ * static_cast<double>(predicted_size()));
}

std::uint64_t NgramLanguageModel::ngram_count(std::span<const WordId> ngram) const {
  char buf[kMaxOrder * sizeof(WordId)];
  const auto it = ngrams_.find(make_key(ngram, buf));
  return it == ngrams_.end() ? 0 : it->second;
}

std::uint64_t NgramLanguageModel::history_count(std::span<const WordId> history) const {
  char buf[kMaxOrder * sizeof(WordId)];
  const auto it = histories_.find(make_key(history, buf));
  return it == histories_.end() ? 0 : it->second;
}

std::vector<std::pair<std::vector<WordId>, std::uint64_t>> NgramLanguageModel::sorted_ngrams()
    const {
  std::vector<std::pair<std::vector<WordId>, std::uint64_t>> out;
  out.reserve(ngrams_.size());
  for (const auto& [key, count] : ngrams_) out.emplace_back(decode_key(key), count);
  std::sort(out.begin(), out.end());
  return out;
}

NgramTrainer::NgramTrainer(NgramOptions options) : options_(options) {
  check_options(options.order, options.add_k);
}

void NgramTrainer::add(const Sentence& sentence) {
  if (sentence.blank()) return;
  ++sentences_;
  // Provisional ids: 0 is <s>, 1 is </s>; words from 2 on. The literal
  // reserved spellings are folded into a provisional "<unk>" word.
  const auto n = static_cast<std::size_t>(options_.order);
  std::vector<WordId> ids(n - 1, 0);
  ids.reserve(n + sentence.tokens.size());
  for (const auto& tok : sentence.tokens) {
    std::string_view w = tok;
    if (w == Vocabulary::kStartToken || w == Vocabulary::kEndToken) w = Vocabulary::kUnkToken;
    auto it = provisional_.find(w);
    WordId id;
    if (it == provisional_.end()) {
      id = static_cast<WordId>(provisional_words_.size() + 2);
      provisional_.emplace(std::string(w), id);
      provisional_words_.emplace_back(w);
      word_counts_.push_back(1);
    } else {
      id = it->second;
      ++word_counts_[id - 2];
    }
    ids.push_back(id);
  }
  ids.push_back(1);
  char buf[kMaxOrder * sizeof(WordId)];
  for (std::size_t end = n; end <= ids.size(); ++end) {
    const auto key = make_key(std::span(ids).subspan(end - n, n), buf);
    auto it = ngrams_.find(key);
    if (it == ngrams_.end()) {
      ngrams_.emplace(std::string(key), 1);
    } else {
      ++it->second;
    }
  }
}

NgramLanguageModel NgramTrainer::finish() const {
  if (sentences_ == 0) throw TrainingError("cannot train a language model on an empty stream");

  std::vector<std::string> kept;
  for (std::size_t i = 0; i < provisional_words_.size(); ++i) {
    if (word_counts_[i] >= options_.min_count &&
        provisional_words_[i] != Vocabulary::kUnkToken) {
      kept.push_back(provisional_words_[i]);
    }
  }
  std::sort(kept.begin(), kept.end());
  NgramLanguageModel lm(options_.order, options_.add_k, options_.min_count, Vocabulary(kept));

  std::vector<WordId> remap(provisional_words_.size() + 2);
  remap[0] = Vocabulary::kStart;
  remap[1] = Vocabulary::kEnd;
  for (std::size_t i = 0; i < provisional_words_.size(); ++i) {
    remap[i + 2] = lm.vocab_.lookup(provisional_words_[i]);
  }

  // Re-key in sorted order so the final hash tables are built identically on
  // every run.
  std::vector<std::pair<std::vector<WordId>, std::uint64_t>> remapped;
  remapped.reserve(ngrams_.size());
  for (const auto& [key, count] : ngrams_) {
    auto ids = decode_key(key);
    for (auto& id : ids) id = remap[id];
    remapped.emplace_back(std::move(ids), count);
  }
  std::sort(remapped.begin(), remapped.end());
  for (const auto& [ids, count] : remapped) lm.add_ngram(ids, count);
  return lm;
}

NgramLanguageModel train_ngram(std::span<const Sentence> sentences, NgramOptions options) {
  NgramTrainer trainer(options);
  for (const auto& s : sentences) trainer.add(s);
  return trainer.finish();
}

double cross_entropy(const NgramLanguageModel& lm, std::span<const std::string> tokens) {
  if (tokens.empty()) throw EmptySentenceError();
  const auto n = static_cast<std::size_t>(lm.order());
  std::vector<WordId> ids(n - 1, Vocabulary::kStart);
  ids.reserve(n + tokens.size());
  for (const auto& t : tokens) ids.push_back(lm.vocab().lookup(t));
  ids.push_back(Vocabulary::kEnd);

  double log_sum = 0.0;
  for (std::size_t end = n; end <= ids.size(); ++end) {
    const std::span<const WordId> window(ids.data() + end - n, n);
    log_sum += std::log(lm.prob(window.first(n - 1), window[n - 1]));
  }
  return -log_sum / static_cast<double>(tokens.size() + 1);
}

double cross_entropy(const NgramLanguageModel& lm, const Sentence& sentence) {
  return cross_entropy(lm, std::span<const std::string>(sentence.tokens));
}

double perplexity(const NgramLanguageModel& lm, const Sentence& sentence) {
  return std::exp(cross_entropy(lm, sentence));
}

void save_lm(const NgramLanguageModel& lm, const std::filesystem::path& path) {
  AtomicOutput file(path);
  auto& out = file.stream();
  out << kMagic << '\t' << kFormatVersion << '\n';
  out << "order\t" << lm.order() << '\n';
  out << "add_k\t" << format_exact(lm.add_k()) << '\n';
  out << "min_count\t" << lm.min_count() << '\n';
  const auto& vocab = lm.vocab();
  out << "vocab\t" << vocab.size() << '\n';
  for (WordId id = 0; id < vocab.size(); ++id) out << vocab.word(id) << '\n';
  const auto ngrams = lm.sorted_ngrams();
  out << "ngrams\t" << ngrams.size() << '\n';
  for (const auto& [ids, count] : ngrams) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out << ' ';
      out << vocab.word(ids[i]);
    }
    out << '\t' << count << '\n';
  }
  out << "end\n";
  file.commit();
}

namespace {

class ModelFileParser {
 public:
  explicit ModelFileParser(const std::filesystem::path& path) : reader_(path) {}

  std::string& line() {
    if (!reader_.next(line_)) fail("unexpected end of file", 0);
    return line_;
  }

  std::string_view field(std::string_view key) {
    const auto& l = line();
    const auto fields = split_fields(l, '\t');
    if (fields.size() != 2 || fields[0] != key) {
      fail("expected '" + std::string(key) + "<TAB>value'", reader_.line_number());
    }
    return fields[1];
  }

  std::uint64_t uint_field(std::string_view key) {
    const auto v = parse_uint(field(key));
    if (!v) fail("malformed integer for '" + std::string(key) + "'", reader_.line_number());
    return *v;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t line) const {
    throw ParseError(reader_.path().string() + ":" + std::to_string(line) + ": " + what, line);
  }

  std::size_t line_number() const { return reader_.line_number(); }

 private:
  LineReader reader_;
  std::string line_;
};

}  // namespace

NgramLanguageModel load_lm(const std::filesystem::path& path) {
  ModelFileParser p(path);
  {
    const auto fields = split_fields(p.line(), '\t');
    if (fields.size() != 2 || fields[0] != kMagic) {
      p.fail("not a parafilter n-gram model file", 1);
    }
    if (fields[1] != std::to_string(kFormatVersion)) {
      throw IncompatibleVersionError(path.string() + ": model format version " +
                                     std::string(fields[1]) + ", expected " +
                                     std::to_string(kFormatVersion));
    }
  }
  const auto order = p.uint_field("order");
  const auto k = parse_double(p.field("add_k"));
  if (!k) p.fail("malformed add_k", p.line_number());
  const auto min_count = p.uint_field("min_count");
  const auto vocab_size = p.uint_field("vocab");
  if (vocab_size < 3) p.fail("vocabulary lacks the reserved tokens", p.line_number());
  std::vector<std::string> words;
  for (std::uint64_t i = 0; i < vocab_size; ++i) {
    auto& w = p.line();
    if (i < 3) {
      static constexpr std::string_view kReserved[] = {Vocabulary::kUnkToken,
                                                       Vocabulary::kEndToken,
                                                       Vocabulary::kStartToken};
      if (w != kReserved[i]) p.fail("reserved token out of place", p.line_number());
    } else {
      if (w.empty() || w.find_first_of(" \t") != std::string::npos) {
        p.fail("malformed vocabulary word", p.line_number());
      }
      words.push_back(w);
    }
  }
  const auto n_ngrams = p.uint_field("ngrams");
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> counts;
  counts.reserve(n_ngrams);
  for (std::uint64_t i = 0; i < n_ngrams; ++i) {
    const auto& l = p.line();
    const auto fields = split_fields(l, '\t');
    const auto count = fields.size() == 2 ? parse_uint(fields[1]) : std::nullopt;
    if (!count) p.fail("expected 'n-gram<TAB>count'", p.line_number());
    std::vector<std::string> tokens;
    for (auto t : split_fields(fields[0], ' ')) tokens.emplace_back(t);
    if (tokens.size() != order) p.fail("n-gram length does not match order", p.line_number());
    counts.emplace_back(std::move(tokens), *count);
  }
  if (p.line() != "end") p.fail("missing end marker", p.line_number());
  try {
    return NgramLanguageModel::from_counts(static_cast<int>(order), *k, min_count, words,
                                           counts);
  } catch (const TrainingError& e) {
    p.fail(e.what(), 0);
  }
}

}  // namespace parafilter
