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

#include <cmath>
#include <limits>

#include "parafilter/error.hpp"
#include "parafilter/random.hpp"
#include "parafilter/scoring.hpp"
#include "parafilter/selection.hpp"
#include "support.hpp"

namespace parafilter {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

const double kE1 = std::exp(-1.0);

// Independent restatement of the score algebra.
struct Oracle {
  static double adq(double f, double r) {
    const double disagreement = f > r ? f - r : r - f;
    const double mean = (f + r) / 2.0;
    return std::exp(-(disagreement + mean));
  }
  static double dom(double in, double out) {
    const double quotient = std::exp(out) / std::exp(in);
    return quotient < 1.0 ? quotient : 1.0;
  }
};

TEST(DualScore, HandValues) {
  EXPECT_EQ(dual_score(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(dual_score(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(dual_score(1, 3), 4.0);
}

TEST(DualScore, RejectsBadInput) {
  EXPECT_THROW(dual_score(-0.1, 1), DomainError);
  EXPECT_THROW(dual_score(1, std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(adequacy(std::nan(""), 1), DomainError);
}

TEST(Adequacy, HandValues) {
  EXPECT_EQ(adequacy(0, 0), 1.0);
  EXPECT_NEAR(adequacy(1, 1), kE1, 1e-9);
  EXPECT_NEAR(adequacy(1, 3), std::exp(-4.0), 1e-9);
  EXPECT_NEAR(adequacy(1, 3), 0.018316, 1e-6);
}

TEST(DomainScore, HandValues) {
  EXPECT_EQ(domain_score(1, 1), 1.0);
  EXPECT_NEAR(domain_score(2, 1), kE1, 1e-9);
  EXPECT_EQ(domain_score(0.5, 2), 1.0);
  EXPECT_THROW(domain_score(std::numeric_limits<double>::infinity(), 1), DomainError);
}

TEST(CombinedScore, HandValues) {
  EXPECT_EQ(combined_score(0.1, 0.75, true), 0.75);
  EXPECT_EQ(combined_score(0.5, 0.5, false), 0.25);
  EXPECT_EQ(combined_score(1, 1, false), 1.0);
  EXPECT_THROW(combined_score(0, 0.5, false), DomainError);
  EXPECT_THROW(combined_score(0.5, 1.5, false), DomainError);
}

TEST(Record, HandComposition) {
  ScoreRecord r{0, 1, 1, 1, 1};
  finalize_record(r);
  EXPECT_NEAR(r.adq, kE1, 1e-12);
  EXPECT_EQ(r.dom, 1.0);
  EXPECT_NEAR(r.combined, 0.367879, 1e-6);

  ScoreRecord t{0, 7, 0.5, 2, 1};
  t.flags = kFlagTrusted;
  finalize_record(t);
  EXPECT_EQ(t.adq, 1.0);
  EXPECT_NEAR(t.combined, kE1, 1e-12);
}

TEST(Algebra, MatchesOracleOnRandomTuples) {
  Rng rng(61);
  for (int i = 0; i < 100000; ++i) {
    const double f = 30 * uniform_unit(rng), r = 30 * uniform_unit(rng);
    const double in = 15 * uniform_unit(rng), out = 15 * uniform_unit(rng);
    const double adq = adequacy(f, r);
    const double dom = domain_score(in, out);
    EXPECT_NEAR(adq, Oracle::adq(f, r), 1e-12);
    EXPECT_NEAR(dom, Oracle::dom(in, out), 1e-12);
    EXPECT_NEAR(combined_score(adq, dom, false), Oracle::adq(f, r) * Oracle::dom(in, out), 1e-12);
    // Symmetry is exact.
    ASSERT_EQ(adq, adequacy(r, f));
    // Ranges.
    ASSERT_GT(adq, 0.0);
    ASSERT_LE(adq, 1.0);
    ASSERT_GT(dom, 0.0);
    ASSERT_LE(dom, 1.0);
    if (in <= out) {
      ASSERT_EQ(dom, 1.0);
    }
  }
}

TEST(Algebra, AgreementMaximizesAdequacyForFixedSum) {
  Rng rng(67);
  for (int i = 0; i < 10000; ++i) {
    const double sum = 20 * uniform_unit(rng);
    const double split = uniform_unit(rng);
    EXPECT_LE(adequacy(sum * split, sum * (1 - split)), adequacy(sum / 2, sum / 2) + 1e-15);
  }
}

TEST(Algebra, EqualEntropiesGiveExpMinusH) {
  double previous = 2.0;
  for (double h = 0; h < 20; h += 0.125) {
    EXPECT_NEAR(adequacy(h, h), std::exp(-h), 1e-15);
    EXPECT_LT(adequacy(h, h), previous);
    previous = adequacy(h, h);
  }
}

TEST(Algebra, AdequacyIsOneOnlyAtZero) {
  EXPECT_EQ(adequacy(0, 0), 1.0);
  EXPECT_LT(adequacy(1e-9, 0), 1.0);
  EXPECT_LT(adequacy(0, 1e-9), 1.0);
}

TEST(Algebra, ExtremeEntropiesStayPositive) {
  EXPECT_GT(adequacy(1e4, 1e4), 0.0);
  EXPECT_GT(domain_score(1e4, 0), 0.0);
}

TEST(Flags, RoundTrip) {
  for (std::uint8_t f = 0; f < 8; ++f) EXPECT_EQ(parse_flags(flags_to_string(f)), f);
  EXPECT_EQ(flags_to_string(0), "-");
  EXPECT_EQ(flags_to_string(kFlagTrusted | kFlagBlank), "trusted,blank");
  EXPECT_THROW(parse_flags("shiny"), FormatError);
}

// A scorer answering from a table keyed by pair id.
class TableScorer : public PairScorer {
 public:
  explicit TableScorer(std::vector<double> v) : v_(std::move(v)) {}
  double cross_entropy(const SentencePair& p) const override { return v_.at(p.id); }

 private:
  std::vector<double> v_;
};

class CorpusScoring : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(71);
    std::string text;
    for (int i = 0; i < kPairs; ++i) {
      text += "x" + std::to_string(i) + "\ty" + std::to_string(i) + "\n";
      for (auto* v : {&f_, &r_, &in_, &out_}) v->push_back(12 * uniform_unit(rng));
    }
    write_file(dir_ / "c.tsv", text);
  }

  std::vector<ScoreRecord> run(std::size_t workers, std::size_t batch, bool trusted = false) {
    TableScorer f(f_), r(r_), in(in_), out(out_);
    auto stream = CorpusStream::open_tsv(
        dir_ / "c.tsv", {false, trusted ? Provenance::kTrusted : Provenance::kCandidate});
    return score_corpus(stream, {&f, &r, &in, &out}, {kDefaultMaxTokens, workers, batch});
  }

  static constexpr int kPairs = 1000;
  TempDir dir_;
  std::vector<double> f_, r_, in_, out_;
};

TEST_F(CorpusScoring, MatchesOracle) {
  const auto records = run(1, 64);
  ASSERT_EQ(records.size(), static_cast<std::size_t>(kPairs));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    EXPECT_EQ(rec.id, i);
    EXPECT_EQ(rec.h_fwd, f_[i]);
    EXPECT_EQ(rec.h_in, in_[i]);
    EXPECT_NEAR(rec.adq, Oracle::adq(f_[i], r_[i]), 1e-12);
    EXPECT_NEAR(rec.dom, Oracle::dom(in_[i], out_[i]), 1e-12);
    EXPECT_NEAR(rec.combined, Oracle::adq(f_[i], r_[i]) * Oracle::dom(in_[i], out_[i]), 1e-12);
    EXPECT_EQ(rec.flags, kFlagNone);
  }
}

TEST_F(CorpusScoring, TrustedPairsKeepDomainOnly) {
  for (const auto& rec : run(2, 100, true)) {
    EXPECT_EQ(rec.adq, 1.0);
    EXPECT_TRUE(rec.trusted());
    EXPECT_EQ(rec.combined, rec.dom);
  }
}

TEST_F(CorpusScoring, WorkerCountDoesNotMatter) {
  const auto base = run(1, 8192);
  for (std::size_t workers : {2u, 3u, 8u}) {
    for (std::size_t batch : {1u, 7u, 256u}) {
      const auto other = run(workers, batch);
      ASSERT_EQ(other.size(), base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_EQ(format_record(other[i]), format_record(base[i]));
      }
    }
  }
}

TEST(ScorePair, BlankAndOverlongAreFlaggedNotScored) {
  TableScorer never({});
  const Scorers s{&never, &never, &never, &never};
  SentencePair blank{3, tokenize("a b", false), tokenize("", false), Provenance::kCandidate};
  const auto b = score_pair(blank, s, 250);
  EXPECT_EQ(b.combined, 0.0);
  EXPECT_EQ(b.flags, kFlagBlank);
  EXPECT_TRUE(std::isnan(b.h_fwd));
  EXPECT_EQ(format_record(b), "3\tNA\tNA\tNA\tNA\tNA\tNA\t0\tblank");

  SentencePair longer{4, tokenize("a b c", false), tokenize("d", false), Provenance::kTrusted};
  const auto l = score_pair(longer, s, 2);
  EXPECT_EQ(l.combined, 0.0);
  EXPECT_EQ(l.flags, kFlagOverlong | kFlagTrusted);
}

TEST(ScorePair, ScorerFailureNamesThePair) {
  TableScorer empty({});
  const Scorers s{&empty, &empty, &empty, &empty};
  SentencePair p{9, tokenize("a", false), tokenize("b", false), Provenance::kCandidate};
  try {
    score_pair(p, s, 250);
    FAIL();
  } catch (const ScoringError& e) {
    EXPECT_EQ(e.pair_id(), 9u);
  }
}

TEST(ScoreCorpus, NeedsAllFourScorers) {
  TempDir dir;
  write_file(dir / "c.tsv", "a\tb\n");
  auto stream = CorpusStream::open_tsv(dir / "c.tsv");
  TableScorer t({1.0});
  EXPECT_THROW(score_corpus(stream, {&t, &t, &t, nullptr}, {}), ConfigError);
}

// Real built-in scorers wired through the record path.
TEST(ScoreCorpus, BuiltInScorersFeedTheRightSides) {
  LexicalTranslationModel fwd(false, Direction::kForward);
  fwd.set_prob("haus", "house", 1.0);
  LexicalTranslationModel rev(false, Direction::kReverse);
  rev.set_prob("house", "haus", 0.5);
  const auto lm = NgramLanguageModel::from_counts(1, 1.0, 1, {"house", "x"}, {});
  TranslationScorer f(fwd), r(rev);
  TargetLanguageModelScorer in(lm), out(lm);
  SentencePair p{0, tokenize("haus", false), tokenize("house", false), Provenance::kCandidate};
  const auto rec = score_pair(p, {&f, &r, &in, &out}, 250);
  EXPECT_EQ(rec.h_fwd, 0.0);
  EXPECT_NEAR(rec.h_rev, std::log(2.0), 1e-12);
  EXPECT_NEAR(rec.h_in, std::log(4.0), 1e-12);
  EXPECT_EQ(rec.dom, 1.0);
}

TEST(ScoreFile, WriteAndReadBack) {
  TempDir dir;
  std::vector<ScoreRecord> records;
  for (std::size_t i = 0; i < 5; ++i) {
    ScoreRecord r{i, 0.1 * i, 0.2, 0.3 * i, 0.4};
    finalize_record(r);
    records.push_back(r);
  }
  records[3].flags = kFlagBlank;
  records[3].combined = 0;
  {
    ScoreWriter w(dir / "s.tsv");
    for (const auto& r : records) w.write(r);
    w.commit();
  }
  const auto text = read_file(dir / "s.tsv");
  EXPECT_EQ(text.substr(0, text.find('\n')), kScoreHeader);
  const auto back = read_scores(dir / "s.tsv");
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(format_record(back[i]), format_record(records[i]));
  }
}

TEST(ScoreFile, MalformedLinesReportLineNumbers) {
  TempDir dir;
  const std::string header = std::string(kScoreHeader) + "\n";
  write_file(dir / "s.tsv", header + "0\t1\t1\t1\t1\t0.3\t1\t0.3\t-\n1\t1\t1\n");
  ScoreReader reader(dir / "s.tsv");
  ASSERT_TRUE(reader.next());
  try {
    reader.next();
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write_file(dir / "h.tsv", "id\tscore\n");
  EXPECT_THROW(ScoreReader(dir / "h.tsv"), ParseError);
  write_file(dir / "f.tsv", header + "0\t1\t1\t1\t1\t0.3\t1\t0.3\tgreen\n");
  ScoreReader flags(dir / "f.tsv");
  EXPECT_THROW(flags.next(), ParseError);
}

}  // namespace
}  // namespace parafilter
