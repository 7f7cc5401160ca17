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

// Plain "key = value" configuration files and the declarative description of
// a full filtering run.

#ifndef PARAFILTER_CONFIG_HPP_
#define PARAFILTER_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace parafilter {

// Ordered key/value list. Lines are "key = value"; blank lines and lines
// starting with '#' are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string serialize() const;
  // Written atomically.
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Everything needed to reproduce a train -> score -> select -> weights run.
// Relative paths are resolved against the directory of the config file.
struct PipelineConfig {
  // Candidate corpus: tsv, or src + tgt.
  std::filesystem::path corpus_src;
  std::filesystem::path corpus_tgt;
  std::filesystem::path corpus_tsv;
  bool trusted = false;
  bool lowercase = false;
  std::size_t max_tokens = 250;

  // Clean parallel data for both translation directions.
  std::filesystem::path tm_train_src;
  std::filesystem::path tm_train_tgt;
  std::filesystem::path tm_train_tsv;
  int tm_iterations = 5;
  bool tm_null = true;

  // In-domain monolingual target text; general-domain text, or when empty a
  // random sample of lm_out_sample candidate target sentences.
  std::filesystem::path lm_in_train;
  std::filesystem::path lm_out_train;
  std::size_t lm_out_sample = 100000;
  int lm_order = 3;
  double lm_add_k = 0.1;
  std::uint64_t lm_min_count = 2;

  // External cross-entropy files; each one replaces the matching built-in
  // model when set.
  std::filesystem::path fwd_scores;
  std::filesystem::path rev_scores;
  std::filesystem::path in_scores;
  std::filesystem::path out_scores;

  std::optional<std::size_t> top_n;
  std::optional<double> threshold;

  std::filesystem::path output_prefix;
  std::uint64_t seed = 1;
  std::size_t workers = 0;  // 0: hardware concurrency
  std::size_t memory_budget = std::size_t{4} << 30;
  std::string log_level = "info";

  // Throws UsageError on unknown keys, malformed values or an inconsistent
  // combination (e.g. both top_n and threshold).
  static PipelineConfig from_kv(const KeyValueConfig& kv,
                                const std::filesystem::path& base_dir = {});
  KeyValueConfig to_kv() const;
  void validate() const;
};

}  // namespace parafilter

#endif  // PARAFILTER_CONFIG_HPP_
