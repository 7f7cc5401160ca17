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

#include "parafilter/lexical_tm.hpp"

#include <algorithm>
#include <cmath>

#include "parafilter/error.hpp"
#include "parafilter/io.hpp"

namespace parafilter {

std::string_view to_string(Direction d) { return d == Direction::kForward ? "fwd" : "rev"; }

Direction parse_direction(std::string_view text) {
  if (text == "fwd") return Direction::kForward;
  if (text == "rev") return Direction::kReverse;
  throw UsageError("direction must be 'fwd' or 'rev', got '" + std::string(text) + "'");
}

bool EmTrace::non_decreasing(double tolerance) const {
  for (std::size_t i = 1; i < log_likelihood.size(); ++i) {
    if (log_likelihood[i] < log_likelihood[i - 1] - tolerance) return false;
  }
  return true;
}

LexicalTranslationModel::LexicalTranslationModel(bool use_null, Direction direction)
    : use_null_(use_null), direction_(direction) {
  if (use_null_) intern_source(kNullToken);
}

std::uint32_t LexicalTranslationModel::source_id(std::string_view w) const {
  auto it = src_index_.find(w);
  return it == src_index_.end() ? kNoWord : it->second;
}

std::uint32_t LexicalTranslationModel::target_id(std::string_view w) const {
  auto it = tgt_index_.find(w);
  return it == tgt_index_.end() ? kNoWord : it->second;
}

std::uint32_t LexicalTranslationModel::intern_source(std::string_view w) {
  auto [it, inserted] = src_index_.try_emplace(std::string(w), 0);
  if (inserted) {
    it->second = static_cast<std::uint32_t>(src_words_.size());
    src_words_.emplace_back(w);
  }
  return it->second;
}

std::uint32_t LexicalTranslationModel::intern_target(std::string_view w) {
  auto [it, inserted] = tgt_index_.try_emplace(std::string(w), 0);
  if (inserted) {
    it->second = static_cast<std::uint32_t>(tgt_words_.size());
    tgt_words_.emplace_back(w);
  }
  return it->second;
}

double LexicalTranslationModel::prob(std::string_view source, std::string_view target) const {
  const auto s = source_id(source);
  const auto t = target_id(target);
  if (s == kNoWord || t == kNoWord) return 0.0;
  auto it = table_.find(key(s, t));
  return it == table_.end() ? 0.0 : it->second;
}

void LexicalTranslationModel::set_prob(std::string_view source, std::string_view target,
                                       double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("translation probability outside [0, 1]");
  table_[key(intern_source(source), intern_target(target))] = p;
}

std::vector<LexicalTranslationModel::Entry> LexicalTranslationModel::sorted_entries() const {
  std::vector<Entry> out;
  out.reserve(table_.size());
  for (const auto& [k, p] : table_) {
    out.push_back({src_words_[k >> 32], tgt_words_[k & 0xFFFFFFFFu], p});
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  return out;
}

double LexicalTranslationModel::row_sum(std::string_view source) const {
  const auto s = source_id(source);
  if (s == kNoWord) return 0.0;
  std::vector<double> row;
  for (const auto& [k, p] : table_) {
    if ((k >> 32) == s) row.push_back(p);
  }
  std::sort(row.begin(), row.end());
  double sum = 0.0;
  for (double p : row) sum += p;
  return sum;
}

double LexicalTranslationModel::cond_cross_entropy(std::span<const std::string> x,
                                                   std::span<const std::string> y) const {
  if (y.empty()) throw EmptySentenceError();
  if (x.empty() && !use_null_) throw EmptySourceError();

  std::vector<std::uint32_t> sources;
  sources.reserve(x.size() + 1);
  if (use_null_) sources.push_back(0);
  for (const auto& w : x) {
    const auto s = source_id(w);
    if (s != kNoWord) sources.push_back(s);
  }
  const double normalizer = static_cast<double>(x.size() + (use_null_ ? 1 : 0));

  // Summands are sorted before adding so the result is exactly invariant
  // under permutations of x and y.
  std::vector<double> terms;
  std::vector<double> logs;
  terms.reserve(sources.size());
  logs.reserve(y.size());
  for (const auto& w : y) {
    terms.clear();
    const auto t = target_id(w);
    if (t != kNoWord) {
      for (auto s : sources) {
        auto it = table_.find(key(s, t));
        if (it != table_.end()) terms.push_back(it->second);
      }
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double v : terms) sum += v;
    logs.push_back(std::log(std::max(sum / normalizer, kProbabilityFloor)));
  }
  std::sort(logs.begin(), logs.end());
  double total = 0.0;
  for (double v : logs) total += v;
  return -total / static_cast<double>(y.size());
}

double cond_cross_entropy(const LexicalTranslationModel& tm, const Sentence& x,
                          const Sentence& y) {
  return tm.cond_cross_entropy(x.tokens, y.tokens);
}

class Model1Trainer {
 public:
  Model1Trainer(std::span<const SentencePair> corpus, const Model1Options& options)
      : options_(options), model_(options.use_null, options.direction) {
    const bool reverse = options.direction == Direction::kReverse;
    for (const auto& pair : corpus) {
      const auto& x = reverse ? pair.tgt.tokens : pair.src.tokens;
      const auto& y = reverse ? pair.src.tokens : pair.tgt.tokens;
      if (y.empty() || (x.empty() && !options.use_null)) continue;
      Example ex;
      if (options.use_null) ex.x.push_back(0);
      for (const auto& w : x) ex.x.push_back(model_.intern_source(w));
      for (const auto& w : y) ex.y.push_back(model_.intern_target(w));
      examples_.push_back(std::move(ex));
    }
    if (examples_.empty()) throw TrainingError("no trainable sentence pairs (all blank)");
  }

  Model1Result run() {
    initialize();
    EmTrace trace;
    double previous = expectation();
    for (int it = 0; it < options_.iterations; ++it) {
      maximization();
      const double current = expectation();
      trace.log_likelihood.push_back(current);
      const double gain = (current - previous) / static_cast<double>(examples_.size());
      previous = current;
      if (options_.min_gain_per_pair > 0 && gain < options_.min_gain_per_pair) break;
    }
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      model_.table_.emplace(params_[i], probs_[i]);
    }
    return {std::move(model_), std::move(trace)};
  }

 private:
  struct Example {
    std::vector<std::uint32_t> x;  // includes NULL (id 0) when enabled
    std::vector<std::uint32_t> y;
  };

  // Uniform over the targets each source word co-occurs with.
  void initialize() {
    for (const auto& ex : examples_) {
      for (auto s : ex.x) {
        for (auto t : ex.y) {
          const auto k = LexicalTranslationModel::key(s, t);
          if (index_.try_emplace(k, static_cast<std::uint32_t>(params_.size())).second) {
            params_.push_back(k);
          }
        }
      }
    }
    std::vector<std::uint32_t> fanout(model_.src_words_.size(), 0);
    for (auto k : params_) ++fanout[k >> 32];
    probs_.resize(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
      probs_[i] = 1.0 / static_cast<double>(fanout[params_[i] >> 32]);
    }
    counts_.assign(params_.size(), 0.0);
    example_params_.resize(examples_.size());
    for (std::size_t e = 0; e < examples_.size(); ++e) {
      const auto& ex = examples_[e];
      auto& ids = example_params_[e];
      ids.reserve(ex.x.size() * ex.y.size());
      for (auto t : ex.y) {
        for (auto s : ex.x) ids.push_back(index_.at(LexicalTranslationModel::key(s, t)));
      }
    }
  }

  // Accumulates expected alignment counts under the current table and
  // returns the corpus log-likelihood under it.
  double expectation() {
    std::fill(counts_.begin(), counts_.end(), 0.0);
    double log_likelihood = 0.0;
    for (std::size_t e = 0; e < examples_.size(); ++e) {
      const auto& ex = examples_[e];
      const auto& ids = example_params_[e];
      const std::size_t width = ex.x.size();
      const double normalizer = static_cast<double>(width);
      for (std::size_t j = 0; j < ex.y.size(); ++j) {
        const auto* row = ids.data() + j * width;
        double denom = 0.0;
        for (std::size_t i = 0; i < width; ++i) denom += probs_[row[i]];
        log_likelihood += std::log(denom / normalizer);
        for (std::size_t i = 0; i < width; ++i) counts_[row[i]] += probs_[row[i]] / denom;
      }
    }
    return log_likelihood;
  }

  void maximization() {
    std::vector<double> totals(model_.src_words_.size(), 0.0);
    for (std::size_t i = 0; i < params_.size(); ++i) totals[params_[i] >> 32] += counts_[i];
    for (std::size_t i = 0; i < params_.size(); ++i) {
      const double total = totals[params_[i] >> 32];
      if (total > 0) probs_[i] = counts_[i] / total;
    }
  }

  Model1Options options_;
  LexicalTranslationModel model_;
  std::vector<Example> examples_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::uint64_t> params_;
  std::vector<double> probs_;
  std::vector<double> counts_;
  std::vector<std::vector<std::uint32_t>> example_params_;
};

Model1Result train_model1(std::span<const SentencePair> corpus, const Model1Options& options) {
  if (options.iterations < 1) throw TrainingError("EM needs at least one iteration");
  return Model1Trainer(corpus, options).run();
}

void save_tm(const LexicalTranslationModel& tm, const std::filesystem::path& path) {
  AtomicOutput file(path);
  auto& out = file.stream();
  const auto entries = tm.sorted_entries();
  out << "parafilter-lexical-tm\t1\n";
  out << "direction\t" << to_string(tm.direction()) << '\n';
  out << "null\t" << (tm.use_null() ? 1 : 0) << '\n';
  out << "entries\t" << entries.size() << '\n';
  for (const auto& e : entries) {
    out << e.source << '\t' << e.target << '\t' << format_exact(e.prob) << '\n';
  }
  out << "end\n";
  file.commit();
}

LexicalTranslationModel load_tm(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  auto fail = [&](const std::string& what) {
    const auto n = reader.line_number();
    throw ParseError(path.string() + ":" + std::to_string(n) + ": " + what, n);
  };
  auto next_fields = [&]() {
    if (!reader.next(line)) {
      throw ParseError(path.string() + ": unexpected end of file", 0);
    }
    return split_fields(line, '\t');
  };
  auto header = [&](std::string_view key) {
    auto f = next_fields();
    if (f.size() != 2 || f[0] != key) fail("expected '" + std::string(key) + "<TAB>value'");
    return std::string(f[1]);
  };

  {
    auto f = next_fields();
    if (f.size() != 2 || f[0] != "parafilter-lexical-tm") {
      fail("not a parafilter translation model file");
    }
    if (f[1] != "1") {
      throw IncompatibleVersionError(path.string() + ": model format version " +
                                     std::string(f[1]) + ", expected 1");
    }
  }
  Direction direction;
  try {
    direction = parse_direction(header("direction"));
  } catch (const UsageError&) {
    fail("direction must be fwd or rev");
  }
  const auto null_flag = header("null");
  if (null_flag != "0" && null_flag != "1") fail("null must be 0 or 1");
  const auto n = parse_uint(header("entries"));
  if (!n) fail("malformed entry count");

  LexicalTranslationModel tm(null_flag == "1", direction);
  for (std::uint64_t i = 0; i < *n; ++i) {
    auto f = next_fields();
    const auto p = f.size() == 3 ? parse_double(f[2]) : std::nullopt;
    if (!p || !(*p >= 0.0 && *p <= 1.0)) fail("expected 'source<TAB>target<TAB>prob'");
    tm.set_prob(f[0], f[1], *p);
  }
  if (!reader.next(line)) throw ParseError(path.string() + ": unexpected end of file", 0);
  if (line != "end") fail("missing end marker");
  return tm;
}

ExternalScores ExternalScores::load(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  std::vector<double> values;
  while (reader.next(line)) {
    const auto n = reader.line_number();
    const auto fields = split_fields(line, '\t');
    if (n == 1 && !fields.empty() && fields[0] == "id") continue;
    auto where = [&] { return path.string() + ":" + std::to_string(n) + ": "; };
    if (fields.size() != 2) throw FormatError(where() + "expected 'id<TAB>H'", n);
    const auto id = parse_uint(fields[0]);
    if (!id) throw FormatError(where() + "non-numeric id '" + std::string(fields[0]) + "'", n);
    const auto h = parse_double(fields[1]);
    if (!h || !std::isfinite(*h)) {
      throw FormatError(where() + "non-numeric H '" + std::string(fields[1]) + "'", n);
    }
    if (*id >= values.size()) values.resize(*id + 1, std::nan(""));
    if (!std::isnan(values[*id])) {
      throw StructuralError(where() + "duplicate id " + std::to_string(*id));
    }
    values[*id] = *h;
  }
  return ExternalScores(std::move(values));
}

double ExternalScores::lookup(std::size_t id) const {
  if (id >= values_.size() || std::isnan(values_[id])) {
    throw MissingIdError("external score table has no entry for id " + std::to_string(id));
  }
  return values_[id];
}

}  // namespace parafilter
