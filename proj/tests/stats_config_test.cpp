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


#include <gtest/gtest.h>

#include <sstream>

#include "parafilter/config.hpp"
#include "parafilter/error.hpp"
#include "parafilter/stats.hpp"
#include "parafilter/synthetic.hpp"
#include "support.hpp"

namespace parafilter {
namespace {

using testing::TempDir;
using testing::write_file;

std::vector<ScoreRecord> records_with(const std::vector<double>& combined) {
  std::vector<ScoreRecord> out;
  for (std::size_t i = 0; i < combined.size(); ++i) {
    ScoreRecord r;
    r.id = i;
    r.combined = combined[i];
    out.push_back(r);
  }
  return out;
}

TEST(Stats, MedianOfThree) {
  const auto r = records_with({1.0, 0.5, 0.0});
  const auto s = compute_stats(records_of(r));
  EXPECT_EQ(s.deciles[5], 0.5);
  EXPECT_EQ(s.deciles[0], 0.0);
  EXPECT_EQ(s.deciles[10], 1.0);
  EXPECT_DOUBLE_EQ(s.mean, 0.5);
  EXPECT_EQ(s.histogram[0], 1u);
  EXPECT_EQ(s.histogram[10], 1u);
  EXPECT_EQ(s.histogram[19], 1u);
}

TEST(Stats, ConstantScores) {
  const auto r = records_with(std::vector<double>(17, 0.3));
  const auto s = compute_stats(records_of(r));
  for (double d : s.deciles) EXPECT_EQ(d, 0.3);
  for (double c : s.retention_cutoff) EXPECT_EQ(c, 0.3);
}

TEST(Stats, EmptyInputIsAnError) {
  const std::vector<ScoreRecord> none;
  EXPECT_THROW(compute_stats(records_of(none)), Error);
}

TEST(Stats, RetentionCutoffsAndFlags) {
  std::vector<double> v;
  for (int i = 0; i < 100; ++i) v.push_back(i / 100.0);
  auto r = records_with(v);
  r[0].flags = kFlagBlank;
  r[1].flags = kFlagOverlong | kFlagTrusted;
  const auto s = compute_stats(records_of(r));
  EXPECT_EQ(s.records, 100u);
  EXPECT_EQ(s.blank, 1u);
  EXPECT_EQ(s.overlong, 1u);
  EXPECT_EQ(s.trusted, 1u);
  EXPECT_DOUBLE_EQ(s.retention_cutoff[0], 0.90);  // best 10 pairs: 0.90 .. 0.99
  EXPECT_DOUBLE_EQ(s.retention_cutoff[2], 0.50);
  std::ostringstream out;
  print_stats(s, out);
  EXPECT_NE(out.str().find("quantile.50\t"), std::string::npos);
  EXPECT_NE(out.str().find("keep.25%\t0.75\n"), std::string::npos) << out.str();
}

TEST(KeyValueConfig, ParseSerializeRoundTrip) {
  const auto kv = KeyValueConfig::parse("# comment\n a = 1 \n\nb=two words\n");
  EXPECT_EQ(kv.get("a"), "1");
  EXPECT_EQ(kv.get("b"), "two words");
  EXPECT_FALSE(kv.get("c"));
  EXPECT_EQ(KeyValueConfig::parse(kv.serialize()).entries(), kv.entries());
  EXPECT_THROW(KeyValueConfig::parse("novalue\n"), UsageError);
  EXPECT_THROW(KeyValueConfig::parse("a=1\na=2\n"), UsageError);
}

TEST(PipelineConfig, ResolvesPathsAndRoundTrips) {
  const auto kv = KeyValueConfig::parse(
      "corpus_tsv = cand.tsv\n"
      "tm_train_tsv = /abs/clean.tsv\n"
      "lm_in_train = in.txt\n"
      "top_n = 5\n"
      "output_prefix = out/run\n"
      "lm_add_k = 0.01\n"
      "workers = 3\n");
  const auto c = PipelineConfig::from_kv(kv, "/data");
  EXPECT_EQ(c.corpus_tsv, std::filesystem::path("/data/cand.tsv"));
  EXPECT_EQ(c.tm_train_tsv, std::filesystem::path("/abs/clean.tsv"));
  EXPECT_EQ(c.top_n, 5u);
  EXPECT_EQ(c.lm_add_k, 0.01);
  EXPECT_EQ(c.workers, 3u);
  const auto again = PipelineConfig::from_kv(c.to_kv());
  EXPECT_EQ(again.to_kv().serialize(), c.to_kv().serialize());
}

TEST(PipelineConfig, RejectsInconsistentRuns) {
  const std::string base =
      "corpus_tsv = c.tsv\ntm_train_tsv = t.tsv\nlm_in_train = i.txt\noutput_prefix = o\n";
  auto bad = [&](const std::string& extra) {
    return PipelineConfig::from_kv(KeyValueConfig::parse(base + extra));
  };
  EXPECT_NO_THROW(bad("top_n = 3\n"));
  EXPECT_THROW(bad(""), UsageError);                            // no selection mode
  EXPECT_THROW(bad("top_n = 3\nthreshold = 0.5\n"), UsageError);  // both
  EXPECT_THROW(bad("threshold = 1.5\n"), UsageError);
  EXPECT_THROW(bad("top_n = 3\nshiny = 1\n"), UsageError);
  EXPECT_THROW(bad("top_n = three\n"), UsageError);
  EXPECT_THROW(bad("top_n = 3\nlm_add_k = 0\n"), UsageError);
  EXPECT_THROW(bad("top_n = 3\ncorpus_src = a.src\n"), UsageError);
  EXPECT_THROW(bad("top_n = 3\nlog_level = loud\n"), UsageError);
}

TEST(Synthetic, DeterministicAndDisjoint) {
  SyntheticBitext a, b;
  const auto pa = a.pairs(50, 9);
  const auto pb = b.pairs(50, 9);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].id, i);
    EXPECT_EQ(pa[i].src.raw, pb[i].src.raw);
    EXPECT_EQ(pa[i].tgt.raw, pb[i].tgt.raw);
    EXPECT_EQ(pa[i].src.tokens.size(), pa[i].tgt.tokens.size());
    EXPECT_GE(pa[i].src.tokens.size(), 6u);
    EXPECT_LE(pa[i].src.tokens.size(), 14u);
  }
  EXPECT_NE(a.pairs(5, 10)[0].src.raw, pa[0].src.raw);
  // The cipher is a bijection onto target words.
  for (std::size_t w = 0; w < 100; ++w) EXPECT_NE(a.source_word(w), a.target_word(w));
  // Same id, same sentence, whether drawn singly or in bulk.
  EXPECT_EQ(a.pair(17, 9).tgt.raw, pa[17].tgt.raw);
  EXPECT_EQ(a.third_language(3, 2).raw, a.third_language_sentences(5, 2)[3].raw);
}

}  // namespace
}  // namespace parafilter
