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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "parafilter/corpus.hpp"
#include "parafilter/error.hpp"
#include "parafilter/io.hpp"
#include "parafilter/random.hpp"
#include "support.hpp"

namespace parafilter {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

std::vector<std::string> tokens_of(std::string_view line, bool lowercase) {
  return tokenize(line, lowercase).tokens;
}

TEST(Tokenize, CollapsesRunsAndLowercases) {
  EXPECT_EQ(tokens_of("Das  Haus", true), (std::vector<std::string>{"das", "haus"}));
  EXPECT_EQ(tokenize("Das  Haus", true).raw, "Das  Haus");
}

TEST(Tokenize, EmptyLineHasNoTokens) {
  EXPECT_TRUE(tokens_of("", false).empty());
  EXPECT_TRUE(tokens_of("", true).empty());
  EXPECT_TRUE(tokenize(" \t ", false).blank());
}

TEST(Tokenize, TabIsWhitespace) {
  EXPECT_EQ(tokens_of("a\tb c", false), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Tokenize, LowercasesBeyondAscii) {
  EXPECT_EQ(tokens_of("ÜBER Straße ΑΒΓ ДОМ", true),
            (std::vector<std::string>{"über", "straße", "αβγ", "дом"}));
}

TEST(Tokenize, InvalidUtf8NamesOffset) {
  try {
    tokenize("ab\xff", false);
    FAIL() << "expected DecodingError";
  } catch (const DecodingError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(tokenize("\xc3", false), DecodingError);          // truncated sequence
  EXPECT_THROW(tokenize("\xc0\xaf", false), DecodingError);      // overlong
  EXPECT_THROW(tokenize("\xed\xa0\x80", false), DecodingError);  // surrogate
}

// Rejoining tokens with single spaces and tokenizing again changes nothing.
TEST(Tokenize, RejoinIsIdempotent) {
  Rng rng(11);
  const std::string alphabet[] = {"a", "b", "ß", "é", " ", "\t", "  ", "x", "Q"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string line;
    const auto len = uniform_below(rng, 20);
    for (std::uint64_t i = 0; i < len; ++i) line += alphabet[uniform_below(rng, 9)];
    for (bool lower : {false, true}) {
      const auto once = tokens_of(line, lower);
      std::string joined;
      for (const auto& t : once) joined += (joined.empty() ? "" : " ") + t;
      EXPECT_EQ(tokens_of(joined, lower), once) << line;
      for (const auto& t : once) {
        EXPECT_EQ(t.find(' '), std::string::npos);
        EXPECT_EQ(t.find('\t'), std::string::npos);
      }
    }
  }
}

TEST(CorpusStream, TwinFilesYieldSequentialIds) {
  TempDir dir;
  write_file(dir / "a.src", "eins\nzwei\ndrei\n");
  write_file(dir / "a.tgt", "one\ntwo\nthree\n");
  auto stream = CorpusStream::open(dir / "a.src", dir / "a.tgt");
  const auto pairs = read_all(stream);
  ASSERT_EQ(pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(pairs[i].id, i);
  EXPECT_EQ(pairs[1].src.raw, "zwei");
  EXPECT_EQ(pairs[2].tgt.raw, "three");
  EXPECT_EQ(stream.count(), 3u);
}

TEST(CorpusStream, LineCountMismatchNamesFirstDivergentLine) {
  TempDir dir;
  write_file(dir / "a.src", "1\n2\n3\n");
  write_file(dir / "a.tgt", "1\n2\n3\n4\n");
  try {
    auto stream = CorpusStream::open(dir / "a.src", dir / "a.tgt");
    read_all(stream);
    FAIL() << "expected StructuralError";
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(CorpusStream, TsvSplitsColumns) {
  TempDir dir;
  write_file(dir / "c.tsv", "hallo\thello\n");
  auto stream = CorpusStream::open_tsv(dir / "c.tsv");
  auto p = stream.next();
  ASSERT_TRUE(p);
  EXPECT_EQ(p->src.raw, "hallo");
  EXPECT_EQ(p->tgt.raw, "hello");
  EXPECT_FALSE(stream.next());
}

TEST(CorpusStream, TsvColumnCountIsChecked) {
  TempDir dir;
  for (const char* bad : {"a\tb\nonly one column\n", "a\tb\na\tb\tc\n"}) {
    write_file(dir / "c.tsv", bad);
    auto stream = CorpusStream::open_tsv(dir / "c.tsv");
    try {
      read_all(stream);
      FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
      EXPECT_EQ(e.line(), 2u);
    }
  }
}

TEST(CorpusStream, ProvenanceAppliesToWholeFile) {
  TempDir dir;
  write_file(dir / "c.tsv", "a\tb\nc\td\n");
  auto stream = CorpusStream::open_tsv(dir / "c.tsv", {false, Provenance::kTrusted});
  for (const auto& p : read_all(stream)) EXPECT_TRUE(p.trusted());
}

TEST(CorpusStream, BlankLinesCarryThrough) {
  TempDir dir;
  write_file(dir / "c.tsv", "a\t\n\tb\n");
  auto stream = CorpusStream::open_tsv(dir / "c.tsv");
  const auto pairs = read_all(stream);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_TRUE(pairs[0].tgt.blank());
  EXPECT_TRUE(pairs[1].src.blank());
  EXPECT_TRUE(pairs[0].blank());
}

TEST(CorpusStream, ByteOrderMarkIsRejected) {
  TempDir dir;
  write_file(dir / "c.tsv", "\xEF\xBB\xBFhallo\thello\n");
  auto stream = CorpusStream::open_tsv(dir / "c.tsv");
  EXPECT_THROW(stream.next(), FormatError);
}

TEST(CorpusStream, MissingFileIsAnError) {
  TempDir dir;
  EXPECT_THROW(CorpusStream::open_tsv(dir / "absent.tsv"), Error);
}

TEST(CorpusStream, RoundTripPreservesRawLines) {
  TempDir dir;
  const std::string src = "Der  Hund\n\nÄpfel und Birnen \n";
  const std::string tgt = "The dog\nempty source\n apples and pears\n";
  write_file(dir / "in.src", src);
  write_file(dir / "in.tgt", tgt);
  auto stream = CorpusStream::open(dir / "in.src", dir / "in.tgt", {true, Provenance::kCandidate});
  const auto pairs = read_all(stream);
  write_parallel(pairs, dir / "out.src", dir / "out.tgt");
  write_tsv(pairs, dir / "out.tsv");
  EXPECT_EQ(read_file(dir / "out.src"), src);
  EXPECT_EQ(read_file(dir / "out.tgt"), tgt);
  auto again = CorpusStream::open_tsv(dir / "out.tsv");
  const auto back = read_all(again);
  ASSERT_EQ(back.size(), pairs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].src.raw, pairs[i].src.raw);
    EXPECT_EQ(back[i].tgt.raw, pairs[i].tgt.raw);
  }
}

class SampleTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string text;
    for (int i = 0; i < 1000; ++i) text += "s" + std::to_string(i) + "\tt" + std::to_string(i) + "\n";
    write_file(dir_ / "c.tsv", text);
  }
  std::vector<SentencePair> draw(std::size_t n, std::uint64_t seed) {
    auto stream = CorpusStream::open_tsv(dir_ / "c.tsv");
    return sample(stream, n, seed);
  }
  static std::vector<std::size_t> ids(const std::vector<SentencePair>& pairs) {
    std::vector<std::size_t> out;
    for (const auto& p : pairs) out.push_back(p.id);
    return out;
  }
  TempDir dir_;
};

TEST_F(SampleTest, SmallCorpusIsReturnedWhole) {
  write_file(dir_ / "small.tsv", "a\tb\nc\td\ne\tf\ng\th\ni\tj\n");
  auto stream = CorpusStream::open_tsv(dir_ / "small.tsv");
  const auto s = sample(stream, 10, 1);
  EXPECT_EQ(ids(s), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST_F(SampleTest, SameSeedSameSample) {
  EXPECT_EQ(ids(draw(100, 7)), ids(draw(100, 7)));
}

TEST_F(SampleTest, DifferentSeedsDiffer) {
  EXPECT_NE(ids(draw(100, 7)), ids(draw(100, 8)));
}

TEST_F(SampleTest, SubsetOfCorpusInAscendingOrder) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (std::size_t n : {0u, 1u, 37u, 999u, 1000u, 5000u}) {
      const auto s = draw(n, seed);
      ASSERT_EQ(s.size(), std::min<std::size_t>(n, 1000));
      for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(s[i].src.raw, "s" + std::to_string(s[i].id));
        if (i > 0) {
          EXPECT_LT(s[i - 1].id, s[i].id);
        }
      }
    }
  }
}

// Each id should be picked with probability n/N.
TEST_F(SampleTest, InclusionIsRoughlyUniform) {
  std::vector<int> hits(1000, 0);
  constexpr int kTrials = 400;
  for (int seed = 0; seed < kTrials; ++seed) {
    for (auto id : ids(draw(100, seed))) ++hits[id];
  }
  // Expected 40 per id; compare decile sums, each expecting 4000.
  for (int d = 0; d < 10; ++d) {
    int sum = 0;
    for (int i = d * 100; i < (d + 1) * 100; ++i) sum += hits[i];
    EXPECT_NEAR(sum, 4000, 400) << "decile " << d;
  }
}

TEST(AtomicOutput, CommitRenames) {
  TempDir dir;
  {
    AtomicOutput out(dir / "x.txt");
    out.stream() << "hi\n";
    EXPECT_TRUE(std::filesystem::exists(dir / "x.txt.partial"));
    EXPECT_FALSE(std::filesystem::exists(dir / "x.txt"));
    out.commit();
  }
  EXPECT_EQ(read_file(dir / "x.txt"), "hi\n");
  EXPECT_FALSE(std::filesystem::exists(dir / "x.txt.partial"));
}

TEST(AtomicOutput, AbandonedOutputLeavesNothing) {
  TempDir dir;
  {
    AtomicOutput out(dir / "x.txt");
    out.stream() << "half";
  }
  EXPECT_TRUE(std::filesystem::is_empty(dir.path()));
}

TEST(AtomicOutput, UnwritableDirectoryIsAnError) {
  TempDir dir;
  EXPECT_THROW(AtomicOutput(dir / "no" / "such" / "x.txt"), Error);
}

TEST(Format, SixSignificantDigits) {
  EXPECT_EQ(format_score(1.0), "1");
  EXPECT_EQ(format_score(0.25), "0.25");
  EXPECT_EQ(format_score(std::exp(-1.0)), "0.367879");
  EXPECT_EQ(format_score(std::numeric_limits<double>::quiet_NaN()), "NA");
  EXPECT_EQ(format_score(1e-12), "1e-12");
}

TEST(Format, ExactRoundTrips) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(uniform_unit(rng), static_cast<int>(uniform_below(rng, 60)) - 30);
    EXPECT_EQ(*parse_double(format_exact(v)), v);
  }
}

TEST(Parse, NumbersAndFields) {
  EXPECT_EQ(parse_uint("42"), 42u);
  EXPECT_FALSE(parse_uint("-1"));
  EXPECT_FALSE(parse_uint("4x"));
  EXPECT_FALSE(parse_uint(""));
  EXPECT_EQ(parse_double("1.5"), 1.5);
  EXPECT_TRUE(std::isnan(*parse_double("NA")));
  EXPECT_FALSE(parse_double("abc"));
  EXPECT_FALSE(parse_double("1.5 "));
  const auto f = split_fields("a\t\tb", '\t');
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[1], "");
}

TEST(LineReader, CountsLinesAndHandlesMissingNewline) {
  TempDir dir;
  write_file(dir / "x", "a\nb\nc");
  EXPECT_EQ(count_lines(dir / "x"), 3u);
  LineReader r(dir / "x");
  std::string line;
  std::vector<std::string> got;
  while (r.next(line)) got.push_back(line);
  EXPECT_EQ(got, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r.line_number(), 3u);
}

TEST(LineReader, KeepsCarriageReturns) {
  TempDir dir;
  write_file(dir / "x", "a\r\n");
  LineReader r(dir / "x");
  std::string line;
  ASSERT_TRUE(r.next(line));
  // Carriage returns are data; LF is the only terminator.
  EXPECT_EQ(line, "a\r");
}

}  // namespace
}  // namespace parafilter
