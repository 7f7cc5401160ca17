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

#ifndef PARAFILTER_STATS_HPP_
#define PARAFILTER_STATS_HPP_

#include <array>
#include <cstddef>
#include <ostream>
#include <vector>

#include "parafilter/selection.hpp"

namespace parafilter {

inline constexpr std::size_t kHistogramBins = 20;
inline constexpr std::array<double, 4> kRetentionFractions = {0.10, 0.25, 0.50, 0.75};

// Summary of the combined scores in a score file, used to pick N for top-N
// selection.
struct ScoreStats {
  std::size_t records = 0;
  std::size_t trusted = 0;
  std::size_t blank = 0;
  std::size_t overlong = 0;
  double mean = 0;
  // Bin i covers [i/20, (i+1)/20); the last bin also holds 1.0.
  std::array<std::size_t, kHistogramBins> histogram{};
  // Quantiles at 0, 0.1, ..., 1.0 with linear interpolation; index 5 is the
  // median.
  std::array<double, 11> deciles{};
  // Combined score of the last pair kept when retaining the best fraction.
  std::array<double, kRetentionFractions.size()> retention_cutoff{};
};

// Linear-interpolation quantile of ascending-sorted values.
double quantile(const std::vector<double>& sorted, double p);

// Throws Error on an empty source.
ScoreStats compute_stats(const RecordSource& records);

void print_stats(const ScoreStats& stats, std::ostream& out);

}  // namespace parafilter

#endif  // PARAFILTER_STATS_HPP_
