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

#include "cli.hpp"
#include "parafilter/corpus.hpp"
#include "parafilter/scoring.hpp"
#include "parafilter/synthetic.hpp"
#include "support.hpp"

namespace parafilter {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticBitext gen;
    write_tsv(gen.pairs(400, 1), path("clean.tsv"));
    write_tsv(gen.pairs(120, 2), path("cand.tsv"));
    auto held = gen.pairs(300, 3);
    std::string mono;
    for (const auto& p : held) mono += p.tgt.raw + "\n";
    write_file(dir_ / "in.txt", mono);
    std::string general;
    for (const auto& s : gen.third_language_sentences(100, 4)) general += s.raw + "\n";
    for (const auto& p : gen.pairs(100, 5)) general += p.tgt.raw + "\n";
    write_file(dir_ / "out.txt", general);
    write_file(dir_ / "third.txt", general.substr(0, general.size() / 2));
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    args.insert(args.begin(), {"--log-level", "error"});
    return cli::run(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  bool exists(const std::string& name) const { return std::filesystem::exists(dir_ / name); }

  // Every file currently in the directory.
  std::vector<std::string> listing() const {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir_.path())) {
      out.push_back(e.path().filename().string());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void train_models() {
    ASSERT_EQ(run({"train-tm", "--direction", "fwd", "--iters", "5", "--in", path("clean.tsv"),
                   "--out", path("fwd.tm")}),
              0)
        << err_.str();
    ASSERT_EQ(run({"train-tm", "--direction", "rev", "--in", path("clean.tsv"), "--out",
                   path("rev.tm")}),
              0)
        << err_.str();
    ASSERT_EQ(run({"train-lm", "--order", "2", "--add-k", "0.05", "--min-count", "1", "--in",
                   path("in.txt"), "--out", path("in.lm")}),
              0)
        << err_.str();
    ASSERT_EQ(run({"train-lm", "--in", path("out.txt"), "--out", path("out.lm")}), 0);
  }

  std::vector<std::string> score_args(const std::string& out) {
    return {"score", "--fwd-model", path("fwd.tm"), "--rev-model", path("rev.tm"), "--in-lm",
            path("in.lm"), "--out-lm", path("out.lm"), "--in", path("cand.tsv"), "--out",
            path(out)};
  }

  TempDir dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, HelpSucceeds) {
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("train-lm"), std::string::npos);
  EXPECT_EQ(run({"score", "--help"}), 0);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_EQ(run({"train-lm", "--in", path("in.txt"), "--out", path("x.lm"), "--bogus"}), 2);
  EXPECT_EQ(run({"train-lm", "--order", "0", "--in", path("in.txt"), "--out", path("x.lm")}), 2);
  EXPECT_EQ(run({"train-tm", "--direction", "up", "--in", path("clean.tsv"), "--out",
                 path("x.tm")}),
            2);
}

TEST_F(Cli, MissingRequiredFlagLeavesNoOutputs) {
  const auto before = listing();
  EXPECT_EQ(run({"train-lm", "--in", path("in.txt")}), 2);
  auto args = score_args("s.tsv");
  args.erase(args.begin() + 1, args.begin() + 3);  // drop --fwd-model
  EXPECT_EQ(run(args), 2);
  EXPECT_EQ(listing(), before);
}

TEST_F(Cli, EndToEndSubcommands) {
  train_models();
  EXPECT_TRUE(exists("fwd.tm.config"));
  EXPECT_NE(read_file(dir_ / "in.lm.config").find("order = 2"), std::string::npos);

  ASSERT_EQ(run(score_args("s.tsv")), 0) << err_.str();
  const auto records = read_scores(dir_ / "s.tsv");
  ASSERT_EQ(records.size(), 120u);
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(records[i].id, i);
  EXPECT_TRUE(exists("s.tsv.config"));

  ASSERT_EQ(run({"select", "--scores", path("s.tsv"), "--top-n", "30", "--in", path("cand.tsv"),
                 "--out-prefix", path("sel")}),
            0)
      << err_.str();
  EXPECT_EQ(count_lines(dir_ / "sel.tsv"), 30u);
  EXPECT_EQ(count_lines(dir_ / "sel.ids"), 30u);
  EXPECT_TRUE(exists("sel.config"));

  ASSERT_EQ(run({"weights", "--scores", path("s.tsv"), "--out", path("w.txt"), "--check-tsv",
                 path("cand.tsv")}),
            0)
      << err_.str();
  EXPECT_EQ(count_lines(dir_ / "w.txt"), 120u);
  EXPECT_NE(out_.str().find("lines\t120"), std::string::npos);

  ASSERT_EQ(run({"stats", "--scores", path("s.tsv")}), 0);
  EXPECT_NE(out_.str().find("records\t120"), std::string::npos);
}

TEST_F(Cli, CorruptScoreEvaluate) {
  train_models();
  ASSERT_EQ(run({"corrupt", "--rate", "0.25", "--seed", "3", "--third-lang", path("third.txt"),
                 "--in", path("cand.tsv"), "--out", path("noisy.tsv"), "--labels",
                 path("labels.tsv")}),
            0)
      << err_.str();
  EXPECT_EQ(count_lines(dir_ / "labels.tsv"), 121u);
  auto args = score_args("noisy.scores");
  args[10] = path("noisy.tsv");
  ASSERT_EQ(run(args), 0) << err_.str();
  ASSERT_EQ(run({"evaluate", "--scores", path("noisy.scores"), "--labels", path("labels.tsv"),
                 "--report", path("report.tsv")}),
            0)
      << err_.str();
  EXPECT_NE(read_file(dir_ / "report.tsv").find("auc_combined\t"), std::string::npos);

  // Wrong-language noise without a third-language file is a configuration problem.
  EXPECT_EQ(run({"corrupt", "--in", path("cand.tsv"), "--out", path("n2.tsv"), "--labels",
                 path("l2.tsv")}),
            2);
  EXPECT_FALSE(exists("n2.tsv"));
}

TEST_F(Cli, SelectOnThreeRecords) {
  write_file(dir_ / "c.src", "a\nb\nc\n");
  write_file(dir_ / "c.tgt", "x\ny\nz\n");
  write_file(dir_ / "s.tsv", std::string(kScoreHeader) +
                                 "\n0\t0\t0\t0\t0\t1\t1\t0.9\t-\n"
                                 "1\t0\t0\t0\t0\t1\t1\t0.1\t-\n"
                                 "2\t0\t0\t0\t0\t1\t1\t0.5\t-\n");
  ASSERT_EQ(run({"select", "--scores", path("s.tsv"), "--top-n", "2", "--in-src", path("c.src"),
                 "--in-tgt", path("c.tgt"), "--out-prefix", path("top")}),
            0)
      << err_.str();
  EXPECT_EQ(read_file(dir_ / "top.src"), "a\nc\n");
  EXPECT_EQ(read_file(dir_ / "top.tgt"), "x\nz\n");
  EXPECT_EQ(read_file(dir_ / "top.ids"), "0\n2\n");
  EXPECT_EQ(run({"select", "--scores", path("s.tsv"), "--top-n", "2", "--threshold", "0.5",
                 "--in-src", path("c.src"), "--in-tgt", path("c.tgt"), "--out-prefix",
                 path("both")}),
            2);
  ASSERT_EQ(run({"weights", "--scores", path("s.tsv"), "--out", path("w")}), 0);
  EXPECT_EQ(read_file(dir_ / "w"), "0.9\n0.1\n0.5\n");
}

TEST_F(Cli, StructuralErrorsExitOneWithoutOutputs) {
  write_file(dir_ / "c.tsv", "a\tx\nb\ty\n");
  write_file(dir_ / "s.tsv", std::string(kScoreHeader) + "\n0\t0\t0\t0\t0\t1\t1\t0.9\t-\n"
                                                         "5\t0\t0\t0\t0\t1\t1\t0.5\t-\n");
  const auto before = listing();
  EXPECT_EQ(run({"select", "--scores", path("s.tsv"), "--top-n", "2", "--in", path("c.tsv"),
                 "--out-prefix", path("sel")}),
            1);
  EXPECT_EQ(run({"weights", "--scores", path("s.tsv"), "--out", path("w")}), 1);
  EXPECT_EQ(listing(), before);
  EXPECT_EQ(run({"stats", "--scores", path("missing.tsv")}), 1);
  write_file(dir_ / "empty.tsv", std::string(kScoreHeader) + "\n");
  EXPECT_EQ(run({"stats", "--scores", path("empty.tsv")}), 1);
}

TEST_F(Cli, ExternalScoresReplaceModels) {
  train_models();
  std::string ext = "id\th\n";
  for (int i = 0; i < 120; ++i) ext += std::to_string(i) + "\t" + (i % 2 ? "1" : "3") + "\n";
  write_file(dir_ / "ext.tsv", ext);
  ASSERT_EQ(run({"score", "--fwd-scores", path("ext.tsv"), "--rev-scores", path("ext.tsv"),
                 "--in-lm", path("in.lm"), "--out-lm", path("out.lm"), "--in", path("cand.tsv"),
                 "--out", path("s.tsv")}),
            0)
      << err_.str();
  const auto records = read_scores(dir_ / "s.tsv");
  EXPECT_EQ(records[1].h_fwd, 1.0);
  EXPECT_EQ(records[2].h_rev, 3.0);
  // Models given in the wrong slot are refused.
  auto swapped = score_args("bad.tsv");
  std::swap(swapped[2], swapped[4]);
  EXPECT_EQ(run(swapped), 2);
  EXPECT_FALSE(exists("bad.tsv"));
}

TEST_F(Cli, PipelineIsReproducible) {
  const std::string config =
      "corpus_tsv = cand.tsv\n"
      "tm_train_tsv = clean.tsv\n"
      "lm_in_train = in.txt\n"
      "lm_out_sample = 60\n"
      "lm_order = 2\n"
      "top_n = 40\n"
      "seed = 7\n"
      "log_level = error\n";
  write_file(dir_ / "a.conf", config + "output_prefix = a/run\nworkers = 1\n");
  write_file(dir_ / "b.conf", config + "output_prefix = b/run\nworkers = 4\n");
  ASSERT_EQ(run({"pipeline", "--config", path("a.conf")}), 0) << err_.str();
  ASSERT_EQ(run({"pipeline", "--config", path("b.conf")}), 0) << err_.str();
  for (const char* suffix : {".scores.tsv", ".selected.tsv", ".selected.ids", ".weights",
                             ".fwd.tm", ".rev.tm", ".in.lm", ".out.lm"}) {
    const auto a = read_file(dir_ / ("a/run" + std::string(suffix)));
    EXPECT_FALSE(a.empty()) << suffix;
    EXPECT_EQ(a, read_file(dir_ / ("b/run" + std::string(suffix)))) << suffix;
  }
  EXPECT_EQ(count_lines(dir_ / "a/run.selected.ids"), 40u);
  const auto echoed = read_file(dir_ / "a/run.config");
  EXPECT_NE(echoed.find("top_n = 40"), std::string::npos);
  EXPECT_NE(echoed.find("workers = 1"), std::string::npos);

  // The echoed config reruns from its own directory. Only the prefix moves.
  auto rerun = echoed;
  const auto at = rerun.find("output_prefix = ");
  rerun.replace(at, rerun.find('\n', at) - at, "output_prefix = " + path("c/run"));
  write_file(dir_ / "a/rerun.conf", rerun);
  ASSERT_EQ(run({"pipeline", "--config", path("a/rerun.conf")}), 0) << err_.str();
  EXPECT_EQ(read_file(dir_ / "c/run.scores.tsv"), read_file(dir_ / "a/run.scores.tsv"));
}

TEST_F(Cli, FailedPipelineRemovesItsArtifacts) {
  write_file(dir_ / "c.conf",
             "corpus_tsv = cand.tsv\ntm_train_tsv = clean.tsv\nlm_in_train = in.txt\n"
             "out_scores = missing.tsv\ntop_n = 5\noutput_prefix = p/run\nlog_level = error\n");
  EXPECT_EQ(run({"pipeline", "--config", path("c.conf")}), 1);
  EXPECT_TRUE(std::filesystem::is_empty(dir_ / "p"));
  write_file(dir_ / "d.conf", "corpus_tsv = cand.tsv\noutput_prefix = q\n");
  EXPECT_EQ(run({"pipeline", "--config", path("d.conf")}), 2);
}

}  // namespace
}  // namespace parafilter
