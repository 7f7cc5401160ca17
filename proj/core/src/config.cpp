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

#include "parafilter/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "parafilter/error.hpp"
#include "parafilter/io.hpp"

namespace parafilter {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig kv;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(n) + ": expected 'key = value'");
    }
    const auto key = trim(t.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(n) + ": empty key");
    if (kv.get(key)) {
      throw UsageError("config line " + std::to_string(n) + ": duplicate key '" + key + "'");
    }
    kv.entries_.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return kv;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KeyValueConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void KeyValueConfig::save(const std::filesystem::path& path) const {
  AtomicOutput out(path);
  out.stream() << serialize();
  out.commit();
}

namespace {

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, const std::string&, const std::filesystem::path&)> read;
  std::function<std::string(const PipelineConfig&)> write;
};

[[noreturn]] void bad_value(const char* key, const std::string& value) {
  throw UsageError(std::string("config key '") + key + "': invalid value '" + value + "'");
}

std::uint64_t to_uint(const char* key, const std::string& v) {
  auto r = parse_uint(v);
  if (!r) bad_value(key, v);
  return *r;
}

double to_double(const char* key, const std::string& v) {
  auto r = parse_double(v);
  if (!r || !std::isfinite(*r)) bad_value(key, v);
  return *r;
}

bool to_bool(const char* key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

std::filesystem::path to_path(const std::string& v, const std::filesystem::path& base) {
  if (v.empty()) return {};
  std::filesystem::path p(v);
  return p.is_relative() && !base.empty() ? base / p : p;
}

Field path_field(const char* key, std::filesystem::path PipelineConfig::*member) {
  return {key,
          [member](PipelineConfig& c, const std::string& v, const std::filesystem::path& base) {
            c.*member = to_path(v, base);
          },
          [member](const PipelineConfig& c) { return (c.*member).string(); }};
}

Field bool_field(const char* key, bool PipelineConfig::*member) {
  return {key,
          [key, member](PipelineConfig& c, const std::string& v, const std::filesystem::path&) {
            c.*member = to_bool(key, v);
          },
          [member](const PipelineConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

template <typename T>
Field uint_field(const char* key, T PipelineConfig::*member) {
  return {key,
          [key, member](PipelineConfig& c, const std::string& v, const std::filesystem::path&) {
            c.*member = static_cast<T>(to_uint(key, v));
          },
          [member](const PipelineConfig& c) { return std::to_string(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      path_field("corpus_src", &PipelineConfig::corpus_src),
      path_field("corpus_tgt", &PipelineConfig::corpus_tgt),
      path_field("corpus_tsv", &PipelineConfig::corpus_tsv),
      bool_field("trusted", &PipelineConfig::trusted),
      bool_field("lowercase", &PipelineConfig::lowercase),
      uint_field("max_tokens", &PipelineConfig::max_tokens),
      path_field("tm_train_src", &PipelineConfig::tm_train_src),
      path_field("tm_train_tgt", &PipelineConfig::tm_train_tgt),
      path_field("tm_train_tsv", &PipelineConfig::tm_train_tsv),
      uint_field("tm_iterations", &PipelineConfig::tm_iterations),
      bool_field("tm_null", &PipelineConfig::tm_null),
      path_field("lm_in_train", &PipelineConfig::lm_in_train),
      path_field("lm_out_train", &PipelineConfig::lm_out_train),
      uint_field("lm_out_sample", &PipelineConfig::lm_out_sample),
      uint_field("lm_order", &PipelineConfig::lm_order),
      {"lm_add_k",
       [](PipelineConfig& c, const std::string& v, const std::filesystem::path&) {
         c.lm_add_k = to_double("lm_add_k", v);
       },
       [](const PipelineConfig& c) { return format_exact(c.lm_add_k); }},
      uint_field("lm_min_count", &PipelineConfig::lm_min_count),
      path_field("fwd_scores", &PipelineConfig::fwd_scores),
      path_field("rev_scores", &PipelineConfig::rev_scores),
      path_field("in_scores", &PipelineConfig::in_scores),
      path_field("out_scores", &PipelineConfig::out_scores),
      {"top_n",
       [](PipelineConfig& c, const std::string& v, const std::filesystem::path&) {
         if (!v.empty()) c.top_n = to_uint("top_n", v);
       },
       [](const PipelineConfig& c) { return c.top_n ? std::to_string(*c.top_n) : ""; }},
      {"threshold",
       [](PipelineConfig& c, const std::string& v, const std::filesystem::path&) {
         if (!v.empty()) c.threshold = to_double("threshold", v);
       },
       [](const PipelineConfig& c) { return c.threshold ? format_exact(*c.threshold) : ""; }},
      path_field("output_prefix", &PipelineConfig::output_prefix),
      uint_field("seed", &PipelineConfig::seed),
      uint_field("workers", &PipelineConfig::workers),
      uint_field("memory_budget", &PipelineConfig::memory_budget),
      {"log_level",
       [](PipelineConfig& c, const std::string& v, const std::filesystem::path&) {
         c.log_level = v;
       },
       [](const PipelineConfig& c) { return c.log_level; }},
  };
  return kFields;
}

}  // namespace

PipelineConfig PipelineConfig::from_kv(const KeyValueConfig& kv,
                                       const std::filesystem::path& base_dir) {
  PipelineConfig c;
  for (const auto& [key, value] : kv.entries()) {
    bool known = false;
    for (const auto& f : fields()) {
      if (key == f.key) {
        f.read(c, value, base_dir);
        known = true;
        break;
      }
    }
    if (!known) throw UsageError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

KeyValueConfig PipelineConfig::to_kv() const {
  KeyValueConfig kv;
  for (const auto& f : fields()) kv.set(f.key, f.write(*this));
  return kv;
}

void PipelineConfig::validate() const {
  const bool twin = !corpus_src.empty() || !corpus_tgt.empty();
  if (twin == !corpus_tsv.empty()) {
    throw UsageError("config needs either corpus_tsv or both corpus_src and corpus_tgt");
  }
  if (twin && (corpus_src.empty() || corpus_tgt.empty())) {
    throw UsageError("corpus_src and corpus_tgt must be given together");
  }
  if (top_n.has_value() == threshold.has_value()) {
    throw UsageError("config needs exactly one of top_n and threshold");
  }
  if (threshold && !(*threshold >= 0.0 && *threshold <= 1.0)) {
    throw UsageError("threshold must lie in [0, 1]");
  }
  if (output_prefix.empty()) throw UsageError("config needs output_prefix");
  const bool tm_needed = fwd_scores.empty() || rev_scores.empty();
  const bool tm_twin = !tm_train_src.empty() || !tm_train_tgt.empty();
  if (tm_needed && (tm_twin == !tm_train_tsv.empty() ||
                    (tm_twin && (tm_train_src.empty() || tm_train_tgt.empty())))) {
    throw UsageError("built-in translation models need tm_train_tsv or tm_train_src + tm_train_tgt");
  }
  if (in_scores.empty() && lm_in_train.empty()) {
    throw UsageError("built-in in-domain language model needs lm_in_train");
  }
  if (tm_iterations < 1) throw UsageError("tm_iterations must be at least 1");
  if (lm_order < 1) throw UsageError("lm_order must be at least 1");
  if (!(lm_add_k > 0)) throw UsageError("lm_add_k must be positive");
  if (log_level != "error" && log_level != "warn" && log_level != "info" &&
      log_level != "debug") {
    throw UsageError("log_level must be error, warn, info or debug");
  }
}

}  // namespace parafilter
