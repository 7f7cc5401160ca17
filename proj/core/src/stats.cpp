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

#include "parafilter/stats.hpp"

#include <algorithm>
#include <cmath>

#include "parafilter/error.hpp"
#include "parafilter/io.hpp"

namespace parafilter {

double quantile(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ScoreStats compute_stats(const RecordSource& records) {
  ScoreStats stats;
  std::vector<double> values;
  double sum = 0.0;
  while (auto r = records()) {
    ++stats.records;
    stats.trusted += (r->flags & kFlagTrusted) != 0;
    stats.blank += (r->flags & kFlagBlank) != 0;
    stats.overlong += (r->flags & kFlagOverlong) != 0;
    const double v = r->combined;
    values.push_back(v);
    sum += v;
    auto bin = static_cast<std::size_t>(std::floor(std::clamp(v, 0.0, 1.0) * kHistogramBins));
    ++stats.histogram[std::min(bin, kHistogramBins - 1)];
  }
  if (values.empty()) throw Error("score file has no records");
  stats.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < stats.deciles.size(); ++i) {
    stats.deciles[i] = quantile(values, static_cast<double>(i) / 10.0);
  }
  const auto n = values.size();
  for (std::size_t i = 0; i < kRetentionFractions.size(); ++i) {
    auto keep = static_cast<std::size_t>(std::ceil(kRetentionFractions[i] * static_cast<double>(n)));
    keep = std::clamp<std::size_t>(keep, 1, n);
    stats.retention_cutoff[i] = values[n - keep];
  }
  return stats;
}

void print_stats(const ScoreStats& s, std::ostream& out) {
  out << "records\t" << s.records << '\n';
  out << "trusted\t" << s.trusted << '\n';
  out << "blank\t" << s.blank << '\n';
  out << "overlong\t" << s.overlong << '\n';
  out << "mean\t" << format_score(s.mean) << '\n';
  for (std::size_t i = 0; i < s.deciles.size(); ++i) {
    out << "quantile." << i * 10 << '\t' << format_score(s.deciles[i]) << '\n';
  }
  for (std::size_t i = 0; i < kRetentionFractions.size(); ++i) {
    out << "keep." << static_cast<int>(std::lround(kRetentionFractions[i] * 100)) << "%\t"
        << format_score(s.retention_cutoff[i]) << '\n';
  }
  for (std::size_t i = 0; i < kHistogramBins; ++i) {
    out << "bin." << format_score(static_cast<double>(i) / kHistogramBins) << '-'
        << format_score(static_cast<double>(i + 1) / kHistogramBins) << '\t' << s.histogram[i]
        << '\n';
  }
}

}  // namespace parafilter
