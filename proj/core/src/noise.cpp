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

#include "parafilter/noise.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "parafilter/error.hpp"
#include "parafilter/random.hpp"
#include "parafilter/selection.hpp"

namespace parafilter {

namespace {

constexpr std::string_view kKindNames[kCorruptionKinds] = {"misalign", "copy", "shuffle",
                                                            "truncate", "wrong-language"};

// Stream tags keep the per-pair random sequences independent.
constexpr std::uint64_t kSelectStream = 0x5e1ec7;
constexpr std::uint64_t kCorruptStream = 0xc0220b7;

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Sentence from_tokens(std::vector<std::string> tokens) {
  Sentence s;
  s.raw = join_tokens(tokens);
  s.tokens = std::move(tokens);
  return s;
}

}  // namespace

std::string_view to_string(CorruptionKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<CorruptionKind> parse_corruption_kind(std::string_view text) {
  for (std::size_t i = 0; i < kCorruptionKinds; ++i) {
    if (text == kKindNames[i]) return static_cast<CorruptionKind>(i);
  }
  return std::nullopt;
}

void NoiseSpec::validate() const {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("noise rate must lie in [0, 1]");
  double sum = 0.0;
  for (double w : mix) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("corruption mix weights must be non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("corruption mix must sum to 1, sums to " + format_exact(sum));
  }
}

std::array<double, kCorruptionKinds> parse_mix(std::string_view text) {
  std::array<double, kCorruptionKinds> mix{};
  if (text == "uniform") {
    mix.fill(1.0 / kCorruptionKinds);
    return mix;
  }
  for (auto entry : split_fields(text, ',')) {
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("mix entry '" + std::string(entry) + "' is not kind=weight");
    }
    const auto kind = parse_corruption_kind(entry.substr(0, eq));
    const auto weight = parse_double(entry.substr(eq + 1));
    if (!kind) throw ConfigError("unknown corruption kind in '" + std::string(entry) + "'");
    if (!weight) throw ConfigError("malformed weight in '" + std::string(entry) + "'");
    mix[static_cast<std::size_t>(*kind)] = *weight;
  }
  return mix;
}

std::string format_mix(const std::array<double, kCorruptionKinds>& mix) {
  std::string out;
  for (std::size_t i = 0; i < kCorruptionKinds; ++i) {
    if (i) out += ',';
    out += kKindNames[i];
    out += '=';
    out += format_exact(mix[i]);
  }
  return out;
}

std::vector<LabeledPair> inject_noise(std::span<const SentencePair> clean, const NoiseSpec& spec,
                                      std::span<const Sentence> third_language) {
  spec.validate();
  const std::size_t n = clean.size();
  if (n < 10) throw ConfigError("noise injection needs at least 10 pairs");
  const auto corrupt_count =
      static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(n)));
  if (spec.rate > 0 && corrupt_count == 0) {
    throw ConfigError("noise rate rounds to zero corrupted pairs for this corpus");
  }
  if (corrupt_count > 0 &&
      spec.mix[static_cast<std::size_t>(CorruptionKind::kWrongLanguage)] > 0 &&
      third_language.empty()) {
    throw ConfigError("wrong-language corruption requires a third-language file");
  }

  // The corrupted positions are the corrupt_count smallest per-pair hashes.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = mix64(spec.seed ^ kSelectStream, clean[i].id);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return keys[a] != keys[b] ? keys[a] < keys[b] : a < b;
  });
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < corrupt_count; ++i) hit[order[i]] = true;

  std::array<double, kCorruptionKinds> cdf{};
  std::partial_sum(spec.mix.begin(), spec.mix.end(), cdf.begin());

  std::vector<LabeledPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LabeledPair lp{clean[i], Label{clean[i].id, std::nullopt}};
    if (!hit[i]) {
      out.push_back(std::move(lp));
      continue;
    }
    Rng rng(mix64(spec.seed ^ kCorruptStream, clean[i].id));
    const double u = uniform_unit(rng) * cdf.back();
    std::size_t k = 0;
    while (k + 1 < kCorruptionKinds && (u >= cdf[k] || spec.mix[k] == 0)) ++k;
    const auto kind = static_cast<CorruptionKind>(k);
    auto& tgt = lp.pair.tgt;
    switch (kind) {
      case CorruptionKind::kMisalign: {
        std::size_t j = i;
        for (int attempt = 0; attempt < 32; ++attempt) {
          j = uniform_below(rng, n - 1);
          if (j >= i) ++j;
          if (clean[j].tgt.raw != clean[i].tgt.raw) break;
        }
        tgt = clean[j].tgt;
        break;
      }
      case CorruptionKind::kCopySource:
        tgt = lp.pair.src;
        break;
      case CorruptionKind::kShuffle: {
        auto tokens = tgt.tokens;
        for (int attempt = 0; attempt < 32; ++attempt) {
          for (std::size_t a = tokens.size(); a > 1; --a) {
            std::swap(tokens[a - 1], tokens[uniform_below(rng, a)]);
          }
          if (tokens != tgt.tokens) break;
        }
        tgt = from_tokens(std::move(tokens));
        break;
      }
      case CorruptionKind::kTruncate: {
        const std::size_t max_keep = tgt.tokens.size() / 2;
        const std::size_t keep = max_keep == 0 ? 0 : 1 + uniform_below(rng, max_keep);
        tgt = from_tokens({tgt.tokens.begin(), tgt.tokens.begin() + keep});
        break;
      }
      case CorruptionKind::kWrongLanguage:
        tgt = third_language[uniform_below(rng, third_language.size())];
        break;
    }
    lp.label.corruption = kind;
    out.push_back(std::move(lp));
  }
  return out;
}

void write_labels(std::span<const LabeledPair> pairs, const std::filesystem::path& path) {
  AtomicOutput out(path);
  out.stream() << "id\tlabel\tkind\n";
  for (const auto& p : pairs) {
    out.stream() << p.label.id << '\t' << (p.label.clean() ? "clean" : "corrupted") << '\t'
                 << (p.label.clean() ? std::string_view("-") : to_string(*p.label.corruption))
                 << '\n';
  }
  out.commit();
}

std::vector<Label> read_labels(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  std::vector<Label> labels;
  while (reader.next(line)) {
    const auto n = reader.line_number();
    if (n == 1 && line == "id\tlabel\tkind") continue;
    auto fail = [&](const std::string& what) {
      return FormatError(path.string() + ":" + std::to_string(n) + ": " + what, n);
    };
    const auto f = split_fields(line, '\t');
    if (f.size() != 3) throw fail("expected 'id<TAB>label<TAB>kind'");
    const auto id = parse_uint(f[0]);
    if (!id) throw fail("malformed id");
    Label label{*id, std::nullopt};
    if (f[1] == "corrupted") {
      label.corruption = parse_corruption_kind(f[2]);
      if (!label.corruption) throw fail("unknown corruption kind '" + std::string(f[2]) + "'");
    } else if (f[1] != "clean") {
      throw fail("label must be clean or corrupted");
    }
    labels.push_back(label);
  }
  return labels;
}

double roc_auc(std::span<const double> scores, std::span<const bool> positive) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Tied block [i, j) shares the average of ranks i+1 .. j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]]) {
        positive_rank_sum += rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nan("");
  const double p = static_cast<double>(n_pos);
  const double u = positive_rank_sum - p * (p + 1) / 2;
  return u / (p * static_cast<double>(n_neg));
}

FilterReport evaluate_filter(std::span<const ScoreRecord> records,
                             std::span<const Label> labels) {
  if (records.size() != labels.size()) {
    throw StructuralError("score and label streams differ in length (" +
                          std::to_string(records.size()) + " vs " +
                          std::to_string(labels.size()) + ")");
  }
  const std::size_t n = records.size();
  std::vector<const Label*> by_id(n, nullptr);
  for (const auto& l : labels) {
    if (l.id >= n || by_id[l.id]) {
      throw StructuralError("label id " + std::to_string(l.id) + " is out of range or repeated");
    }
    by_id[l.id] = &l;
  }
  std::vector<bool> seen(n, false);
  for (const auto& r : records) {
    if (r.id >= n || seen[r.id]) {
      throw StructuralError("score id " + std::to_string(r.id) + " is out of range or repeated");
    }
    seen[r.id] = true;
  }

  FilterReport report;
  report.pairs = n;
  std::vector<double> combined(n), adq(n), dom(n);
  auto positive_buf = std::make_unique<bool[]>(n);
  std::span<bool> positive(positive_buf.get(), n);
  std::array<double, kCorruptionKinds> kind_sum{};
  double clean_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    const auto& l = *by_id[r.id];
    combined[i] = r.combined;
    adq[i] = std::isnan(r.adq) ? 0.0 : r.adq;
    dom[i] = std::isnan(r.dom) ? 0.0 : r.dom;
    positive[i] = l.clean();
    if (l.clean()) {
      ++report.clean;
      clean_sum += r.combined;
    } else {
      const auto k = static_cast<std::size_t>(*l.corruption);
      ++report.by_kind[k].count;
      kind_sum[k] += r.combined;
    }
  }
  report.corrupted = n - report.clean;
  report.k = report.clean;
  report.mean_combined_clean =
      report.clean ? clean_sum / static_cast<double>(report.clean) : std::nan("");
  for (std::size_t k = 0; k < kCorruptionKinds; ++k) {
    auto& s = report.by_kind[k];
    s.mean_combined = s.count ? kind_sum[k] / static_cast<double>(s.count) : std::nan("");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks_before({combined[a], records[a].id}, {combined[b], records[b].id});
  });
  std::size_t hits = 0;
  for (std::size_t i = 0; i < report.k; ++i) hits += positive[order[i]];
  report.precision_at_k =
      report.k ? static_cast<double>(hits) / static_cast<double>(report.k) : std::nan("");
  report.recall_at_k =
      report.clean ? static_cast<double>(hits) / static_cast<double>(report.clean) : std::nan("");

  report.auc_combined = roc_auc(combined, positive);
  report.auc_adq = roc_auc(adq, positive);
  report.auc_dom = roc_auc(dom, positive);
  return report;
}

void write_report(const FilterReport& r, const std::filesystem::path& path) {
  AtomicOutput file(path);
  auto& out = file.stream();
  out << "metric\tvalue\n";
  out << "pairs\t" << r.pairs << '\n';
  out << "clean\t" << r.clean << '\n';
  out << "corrupted\t" << r.corrupted << '\n';
  out << "k\t" << r.k << '\n';
  out << "precision_at_k\t" << format_score(r.precision_at_k) << '\n';
  out << "recall_at_k\t" << format_score(r.recall_at_k) << '\n';
  out << "auc_combined\t" << format_score(r.auc_combined) << '\n';
  out << "auc_adq\t" << format_score(r.auc_adq) << '\n';
  out << "auc_dom\t" << format_score(r.auc_dom) << '\n';
  out << "mean_combined.clean\t" << format_score(r.mean_combined_clean) << '\n';
  for (std::size_t k = 0; k < kCorruptionKinds; ++k) {
    const auto name = kKindNames[k];
    out << "count." << name << '\t' << r.by_kind[k].count << '\n';
    out << "mean_combined." << name << '\t' << format_score(r.by_kind[k].mean_combined) << '\n';
  }
  file.commit();
}

}  // namespace parafilter
