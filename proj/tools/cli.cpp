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


#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "parafilter/config.hpp"
#include "parafilter/corpus.hpp"
#include "parafilter/error.hpp"
#include "parafilter/io.hpp"
#include "parafilter/lexical_tm.hpp"
#include "parafilter/log.hpp"
#include "parafilter/ngram_lm.hpp"
#include "parafilter/noise.hpp"
#include "parafilter/parallel.hpp"
#include "parafilter/scoring.hpp"
#include "parafilter/selection.hpp"
#include "parafilter/stats.hpp"

namespace parafilter::cli {

namespace fs = std::filesystem;

namespace {

// Files committed by the running command. Removed again if it fails later.
class Artifacts {
 public:
  void add(fs::path path) { paths_.push_back(std::move(path)); }
  void remove_all() noexcept {
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    paths_.clear();
  }

 private:
  std::vector<fs::path> paths_;
};

fs::path with_suffix(const fs::path& base, std::string_view suffix) {
  return fs::path(base.string() + std::string(suffix));
}

// Corpus given either as one TSV file or as twin files.
struct CorpusArgs {
  std::string tsv;
  std::string src;
  std::string tgt;
  bool lowercase = false;

  void add_to(CLI::App* app, std::string_view what) {
    auto* t = app->add_option("--in", tsv, std::string(what) + " as source<TAB>target lines");
    auto* s = app->add_option("--in-src", src, std::string(what) + ", source side");
    auto* g = app->add_option("--in-tgt", tgt, std::string(what) + ", target side");
    t->excludes(s)->excludes(g);
    s->needs(g);
    g->needs(s);
  }

  void require() const {
    if (tsv.empty() && src.empty()) throw UsageError("give --in, or --in-src and --in-tgt");
  }

  CorpusStream open(Provenance provenance = Provenance::kCandidate) const {
    require();
    const ReadOptions options{lowercase, provenance};
    return tsv.empty() ? CorpusStream::open(src, tgt, options)
                       : CorpusStream::open_tsv(tsv, options);
  }
};

// Writes every option of the subcommand, as resolved after parsing, next to
// the command's main output.
void echo_config(const CLI::App& sub, const fs::path& path, Artifacts& artifacts) {
  KeyValueConfig kv;
  kv.set("command", sub.get_name());
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    kv.set(name, value);
  }
  kv.save(path);
  artifacts.add(path);
}

// Owns whatever backs the four cross-entropy scorers.
class ScorerSet {
 public:
  void set_translation(Direction d, LexicalTranslationModel tm) {
    if (tm.direction() != d) {
      throw UsageError(std::string("--") + std::string(to_string(d)) + "-model holds a " +
                       std::string(to_string(tm.direction())) + " model");
    }
    auto& slot = d == Direction::kForward ? view_.fwd : view_.rev;
    tms_.push_back(std::make_unique<LexicalTranslationModel>(std::move(tm)));
    slot = adopt(std::make_unique<TranslationScorer>(*tms_.back()));
  }
  void set_language(bool in_domain, NgramLanguageModel lm) {
    lms_.push_back(std::make_unique<NgramLanguageModel>(std::move(lm)));
    (in_domain ? view_.in_domain : view_.out_domain) =
        adopt(std::make_unique<TargetLanguageModelScorer>(*lms_.back()));
  }
  const PairScorer* external(const fs::path& path) {
    return adopt(std::make_unique<ExternalScores>(load_external_scores(path)));
  }
  Scorers& view() { return view_; }

 private:
  const PairScorer* adopt(std::unique_ptr<PairScorer> s) {
    owned_.push_back(std::move(s));
    return owned_.back().get();
  }

  std::vector<std::unique_ptr<LexicalTranslationModel>> tms_;
  std::vector<std::unique_ptr<NgramLanguageModel>> lms_;
  std::vector<std::unique_ptr<PairScorer>> owned_;
  Scorers view_;
};

std::size_t score_to_file(CorpusStream& corpus, const Scorers& scorers,
                          const ScoringOptions& options, const fs::path& path,
                          Artifacts& artifacts) {
  ScoreWriter writer(path);
  std::size_t n = 0;
  score_corpus(corpus, scorers, options, [&](const ScoreRecord& r) {
    writer.write(r);
    ++n;
  });
  writer.commit();
  artifacts.add(path);
  return n;
}

void write_ids(const SelectionResult& sel, const fs::path& path, Artifacts& artifacts) {
  AtomicOutput out(path);
  for (auto id : sel.ids) out.stream() << id << '\n';
  out.commit();
  artifacts.add(path);
}

ExtractPaths extract_paths(const fs::path& prefix, bool tsv) {
  ExtractPaths p;
  if (tsv) {
    p.tsv = with_suffix(prefix, ".tsv");
  } else {
    p.src = with_suffix(prefix, ".src");
    p.tgt = with_suffix(prefix, ".tgt");
  }
  return p;
}

void extract_to(CorpusStream& corpus, const SelectionResult& sel, const ExtractPaths& paths,
                Artifacts& artifacts) {
  extract_selected(corpus, sel, paths);
  for (const auto* p : {&paths.src, &paths.tgt, &paths.tsv}) {
    if (!p->empty()) artifacts.add(*p);
  }
}

void log_selection(const SelectionResult& sel) {
  PF_LOG(kInfo) << "selected " << sel.n_returned << " of " << sel.n_total << " pairs"
                << (sel.cutoff_score ? ", cutoff " + format_score(*sel.cutoff_score) : "");
}

std::size_t score_records(const fs::path& scores) {
  const auto lines = count_lines(scores);
  return lines == 0 ? 0 : lines - 1;  // header
}

// ---- subcommands -----------------------------------------------------------

struct TrainLm {
  NgramOptions lm;
  std::string in;
  std::string out;
  bool lowercase = false;

  void add_to(CLI::App* app) {
    app->add_option("--order", lm.order, "n-gram order")->check(CLI::Range(1, 16));
    app->add_option("--add-k", lm.add_k, "add-k smoothing constant")->check(CLI::PositiveNumber);
    app->add_option("--min-count", lm.min_count, "words seen fewer times map to <unk>");
    app->add_option("--in", in, "training text, one sentence per line")->required();
    app->add_option("--out", out, "model file")->required();
    app->add_flag("--lowercase", lowercase, "lowercase before tokenizing");
  }

  void run(const CLI::App& app, Artifacts& artifacts) const {
    NgramTrainer trainer(lm);
    for (const auto& s : read_sentences(in, lowercase)) trainer.add(s);
    const auto model = trainer.finish();
    PF_LOG(kInfo) << "trained order-" << lm.order << " model on " << trainer.sentences()
                  << " sentences, vocabulary " << model.vocab().size();
    save_lm(model, out);
    artifacts.add(out);
    echo_config(app, with_suffix(out, ".config"), artifacts);
  }
};

struct TrainTm {
  std::string direction = "fwd";
  Model1Options tm;
  CorpusArgs corpus;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--direction", direction, "fwd: t(tgt|src), rev: t(src|tgt)")
        ->check(CLI::IsMember({"fwd", "rev"}));
    app->add_option("--iters", tm.iterations, "EM iterations")->check(CLI::PositiveNumber);
    app->add_flag("--null,!--no-null", tm.use_null, "align to a NULL source word");
    app->add_option("--min-gain", tm.min_gain_per_pair,
                    "stop when an iteration gains less than this many nats per pair")
        ->check(CLI::NonNegativeNumber);
    corpus.add_to(app, "parallel training data");
    app->add_flag("--lowercase", corpus.lowercase, "lowercase before tokenizing");
    app->add_option("--out", out, "model file")->required();
  }

  void run(const CLI::App& app, Artifacts& artifacts) {
    tm.direction = parse_direction(direction);
    auto stream = corpus.open();
    const auto pairs = read_all(stream);
    const auto result = train_model1(pairs, tm);
    for (std::size_t i = 0; i < result.trace.log_likelihood.size(); ++i) {
      PF_LOG(kInfo) << "iteration " << i + 1 << " log-likelihood "
                    << format_exact(result.trace.log_likelihood[i]);
    }
    save_tm(result.model, out);
    artifacts.add(out);
    echo_config(app, with_suffix(out, ".config"), artifacts);
  }
};

struct Score {
  std::string fwd_model, rev_model, in_lm, out_lm;
  std::string fwd_scores, rev_scores, in_scores, out_scores;
  CorpusArgs corpus;
  bool trusted = false;
  std::string out;
  ScoringOptions scoring{kDefaultMaxTokens, 0, 8192};

  void add_to(CLI::App* app) {
    auto pair = [&](const char* model_flag, std::string& model, const char* scores_flag,
                    std::string& scores, const char* what) {
      auto* m = app->add_option(model_flag, model, what);
      auto* s = app->add_option(scores_flag, scores,
                                std::string("external id<TAB>H file replacing ") + model_flag);
      m->excludes(s);
    };
    pair("--fwd-model", fwd_model, "--fwd-scores", fwd_scores, "forward translation model");
    pair("--rev-model", rev_model, "--rev-scores", rev_scores, "reverse translation model");
    pair("--in-lm", in_lm, "--in-scores", in_scores, "in-domain language model");
    pair("--out-lm", out_lm, "--out-scores", out_scores, "general-domain language model");
    corpus.add_to(app, "candidate corpus");
    app->add_flag("--lowercase", corpus.lowercase, "lowercase before tokenizing");
    app->add_flag("--trusted", trusted, "corpus is trusted: adequacy fixed at 1");
    app->add_option("--out", out, "score file")->required();
    app->add_option("--workers", scoring.workers, "worker threads, 0 for all cores");
    app->add_option("--max-tokens", scoring.max_tokens, "longer sides are flagged, not scored")
        ->check(CLI::PositiveNumber);
  }

  void load(ScorerSet& set) const {
    auto need = [](const std::string& a, const std::string& b, const char* what) {
      if (a.empty() && b.empty()) throw UsageError(std::string("missing ") + what);
    };
    need(fwd_model, fwd_scores, "--fwd-model or --fwd-scores");
    need(rev_model, rev_scores, "--rev-model or --rev-scores");
    need(in_lm, in_scores, "--in-lm or --in-scores");
    need(out_lm, out_scores, "--out-lm or --out-scores");
    corpus.require();
    auto& v = set.view();
    if (fwd_model.empty()) v.fwd = set.external(fwd_scores);
    else set.set_translation(Direction::kForward, load_tm(fwd_model));
    if (rev_model.empty()) v.rev = set.external(rev_scores);
    else set.set_translation(Direction::kReverse, load_tm(rev_model));
    if (in_lm.empty()) v.in_domain = set.external(in_scores);
    else set.set_language(true, load_lm(in_lm));
    if (out_lm.empty()) v.out_domain = set.external(out_scores);
    else set.set_language(false, load_lm(out_lm));
  }

  void run(const CLI::App& app, Artifacts& artifacts) const {
    ScorerSet set;
    load(set);
    auto stream = corpus.open(trusted ? Provenance::kTrusted : Provenance::kCandidate);
    auto options = scoring;
    options.workers = resolve_workers(options.workers);
    const auto n = score_to_file(stream, set.view(), options, out, artifacts);
    PF_LOG(kInfo) << "scored " << n << " pairs with " << options.workers << " workers";
    echo_config(app, with_suffix(out, ".config"), artifacts);
  }
};

struct Select {
  std::string scores;
  std::optional<std::size_t> top_n;
  std::optional<double> threshold;
  CorpusArgs corpus;
  std::string prefix;
  SelectionOptions selection;
  std::string temp_dir;

  void add_to(CLI::App* app) {
    app->add_option("--scores", scores, "score file")->required();
    auto* n = app->add_option("--top-n", top_n, "keep the N best pairs");
    auto* t = app->add_option("--threshold", threshold, "keep pairs scoring at least T")
                  ->check(CLI::Range(0.0, 1.0));
    n->excludes(t);
    corpus.add_to(app, "candidate corpus");
    app->add_option("--out-prefix", prefix, "writes PREFIX.src/.tgt (or .tsv) and PREFIX.ids")
        ->required();
    app->add_option("--memory-budget", selection.memory_budget, "bytes of sort keys held in memory")
        ->check(CLI::PositiveNumber);
    app->add_option("--temp-dir", temp_dir, "directory for spilled sort runs");
  }

  void run(const CLI::App& app, Artifacts& artifacts) {
    if (top_n.has_value() == threshold.has_value()) {
      throw UsageError("give exactly one of --top-n and --threshold");
    }
    corpus.require();
    selection.temp_dir = temp_dir;
    ScoreReader reader(scores);
    const auto sel = top_n ? select_top_n(records_of(reader), *top_n, selection)
                           : select_by_threshold(records_of(reader), *threshold);
    log_selection(sel);
    auto stream = corpus.open();
    extract_to(stream, sel, extract_paths(prefix, !corpus.tsv.empty()), artifacts);
    write_ids(sel, with_suffix(prefix, ".ids"), artifacts);
    echo_config(app, with_suffix(prefix, ".config"), artifacts);
  }
};

struct Weights {
  std::string scores;
  std::string out;
  std::optional<std::size_t> corpus_size;
  CorpusArgs check;

  void add_to(CLI::App* app) {
    app->add_option("--scores", scores, "score file")->required();
    app->add_option("--out", out, "weight file, one line per corpus line")->required();
    app->add_option("--corpus-size", corpus_size, "expected number of pairs");
    auto* t = app->add_option("--check-tsv", check.tsv, "corpus to check the weights against");
    auto* s = app->add_option("--check-src", check.src, "corpus source side to check against");
    auto* g = app->add_option("--check-tgt", check.tgt, "corpus target side to check against");
    t->excludes(s)->excludes(g);
    s->needs(g);
    g->needs(s);
  }

  void run(const CLI::App& app, Artifacts& artifacts, std::ostream& report) const {
    const std::size_t size = corpus_size ? *corpus_size : score_records(scores);
    ScoreReader reader(scores);
    emit_weights(records_of(reader), size, out);
    artifacts.add(out);
    if (!check.tsv.empty() || !check.src.empty()) {
      auto stream = check.open();
      const auto digest = check_weight_alignment(out, stream);
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest.digest));
      report << "lines\t" << digest.lines << "\ndigest\t" << hex << '\n';
    }
    echo_config(app, with_suffix(out, ".config"), artifacts);
  }
};

struct Corrupt {
  NoiseSpec spec;
  std::string mix = "uniform";
  std::string third_lang;
  CorpusArgs corpus;
  std::string out;
  std::string out_src;
  std::string out_tgt;
  std::string labels;

  void add_to(CLI::App* app) {
    app->add_option("--rate", spec.rate, "fraction of pairs to corrupt")->check(CLI::Range(0.0, 1.0));
    app->add_option("--mix", mix, "'uniform' or kind=weight,... over misalign, copy, shuffle, "
                                  "truncate, wrong-language");
    app->add_option("--seed", spec.seed, "random seed");
    app->add_option("--third-lang", third_lang, "sentences in a third language");
    corpus.add_to(app, "clean corpus");
    auto* o = app->add_option("--out", out, "corrupted corpus as TSV");
    auto* s = app->add_option("--out-src", out_src, "corrupted corpus, source side");
    auto* g = app->add_option("--out-tgt", out_tgt, "corrupted corpus, target side");
    o->excludes(s)->excludes(g);
    s->needs(g);
    g->needs(s);
    app->add_option("--labels", labels, "label file (id, label, kind)")->required();
  }

  void run(const CLI::App& app, Artifacts& artifacts) {
    if (out.empty() && out_src.empty()) throw UsageError("give --out, or --out-src and --out-tgt");
    spec.mix = parse_mix(mix);
    spec.validate();
    auto stream = corpus.open();
    const auto clean = read_all(stream);
    std::vector<Sentence> third;
    if (!third_lang.empty()) third = read_sentences(third_lang);
    const auto noisy = inject_noise(clean, spec, third);
    std::vector<SentencePair> pairs;
    pairs.reserve(noisy.size());
    for (const auto& lp : noisy) pairs.push_back(lp.pair);
    if (!out.empty()) {
      write_tsv(pairs, out);
      artifacts.add(out);
    } else {
      write_parallel(pairs, out_src, out_tgt);
      artifacts.add(out_src);
      artifacts.add(out_tgt);
    }
    write_labels(noisy, labels);
    artifacts.add(labels);
    echo_config(app, with_suffix(labels, ".config"), artifacts);
  }
};

struct Evaluate {
  std::string scores;
  std::string labels;
  std::string report;

  void add_to(CLI::App* app) {
    app->add_option("--scores", scores, "score file")->required();
    app->add_option("--labels", labels, "label file from corrupt")->required();
    app->add_option("--report", report, "metrics TSV")->required();
  }

  void run(const CLI::App& app, Artifacts& artifacts) const {
    const auto records = read_scores(scores);
    const auto label_list = read_labels(labels);
    const auto r = evaluate_filter(records, label_list);
    PF_LOG(kInfo) << "auc " << format_score(r.auc_combined) << ", precision@" << r.k << " "
                  << format_score(r.precision_at_k);
    write_report(r, report);
    artifacts.add(report);
    echo_config(app, with_suffix(report, ".config"), artifacts);
  }
};

struct Stats {
  std::string scores;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--scores", scores, "score file")->required();
    app->add_option("--out", out, "write the report here instead of stdout");
  }

  void run(Artifacts& artifacts, std::ostream& report) const {
    ScoreReader reader(scores);
    const auto s = compute_stats(records_of(reader));
    if (out.empty()) {
      print_stats(s, report);
      return;
    }
    AtomicOutput file(out);
    print_stats(s, file.stream());
    file.commit();
    artifacts.add(out);
  }
};

struct Pipeline {
  std::string config;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "key = value run description")->required();
  }

  // keep_log_level: --log-level was given on the command line and wins over
  // the config file.
  void run(Artifacts& artifacts, bool keep_log_level) const {
    const fs::path config_path(config);
    // Absolute base so the echoed config is valid from any directory.
    const auto cfg = PipelineConfig::from_kv(KeyValueConfig::load(config_path),
                                             fs::absolute(config_path).parent_path());
    if (!keep_log_level) log_threshold() = parse_log_level(cfg.log_level);
    const fs::path& prefix = cfg.output_prefix;
    if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
    const auto provenance = cfg.trusted ? Provenance::kTrusted : Provenance::kCandidate;
    auto candidates = [&] {
      const ReadOptions o{cfg.lowercase, provenance};
      return cfg.corpus_tsv.empty() ? CorpusStream::open(cfg.corpus_src, cfg.corpus_tgt, o)
                                    : CorpusStream::open_tsv(cfg.corpus_tsv, o);
    };

    ScorerSet set;
    auto& v = set.view();

    // Translation models, both directions from the same clean data.
    if (cfg.fwd_scores.empty() || cfg.rev_scores.empty()) {
      const ReadOptions o{cfg.lowercase, Provenance::kCandidate};
      auto stream = cfg.tm_train_tsv.empty()
                        ? CorpusStream::open(cfg.tm_train_src, cfg.tm_train_tgt, o)
                        : CorpusStream::open_tsv(cfg.tm_train_tsv, o);
      const auto pairs = read_all(stream);
      for (auto d : {Direction::kForward, Direction::kReverse}) {
        if (!(d == Direction::kForward ? cfg.fwd_scores : cfg.rev_scores).empty()) continue;
        Model1Options o1;
        o1.iterations = cfg.tm_iterations;
        o1.use_null = cfg.tm_null;
        o1.direction = d;
        auto result = train_model1(pairs, o1);
        PF_LOG(kInfo) << to_string(d) << " model: " << result.model.entries() << " entries after "
                      << result.trace.log_likelihood.size() << " iterations";
        const auto path = with_suffix(prefix, d == Direction::kForward ? ".fwd.tm" : ".rev.tm");
        save_tm(result.model, path);
        artifacts.add(path);
        set.set_translation(d, std::move(result.model));
      }
    }
    if (!cfg.fwd_scores.empty()) v.fwd = set.external(cfg.fwd_scores);
    if (!cfg.rev_scores.empty()) v.rev = set.external(cfg.rev_scores);

    // Language models over target text.
    const NgramOptions lm_options{cfg.lm_order, cfg.lm_add_k, cfg.lm_min_count};
    auto train_lm = [&](const std::vector<Sentence>& text, const char* suffix) {
      auto lm = train_ngram(text, lm_options);
      const auto path = with_suffix(prefix, suffix);
      save_lm(lm, path);
      artifacts.add(path);
      return lm;
    };
    if (cfg.in_scores.empty()) {
      set.set_language(true, train_lm(read_sentences(cfg.lm_in_train, cfg.lowercase), ".in.lm"));
    } else {
      v.in_domain = set.external(cfg.in_scores);
    }
    if (cfg.out_scores.empty()) {
      std::vector<Sentence> text;
      if (!cfg.lm_out_train.empty()) {
        text = read_sentences(cfg.lm_out_train, cfg.lowercase);
      } else {
        auto stream = candidates();
        for (auto& p : sample(stream, cfg.lm_out_sample, cfg.seed)) text.push_back(std::move(p.tgt));
        PF_LOG(kInfo) << "general-domain model trained on " << text.size()
                      << " sampled candidate sentences";
      }
      set.set_language(false, train_lm(text, ".out.lm"));
    } else {
      v.out_domain = set.external(cfg.out_scores);
    }

    // Score, select, weight.
    const auto scores = with_suffix(prefix, ".scores.tsv");
    {
      auto stream = candidates();
      const ScoringOptions so{cfg.max_tokens, resolve_workers(cfg.workers), 8192};
      const auto n = score_to_file(stream, v, so, scores, artifacts);
      PF_LOG(kInfo) << "scored " << n << " pairs";
    }
    {
      ScoreReader reader(scores);
      SelectionOptions so;
      so.memory_budget = cfg.memory_budget;
      const auto sel = cfg.top_n ? select_top_n(records_of(reader), *cfg.top_n, so)
                                 : select_by_threshold(records_of(reader), *cfg.threshold);
      log_selection(sel);
      auto stream = candidates();
      const auto selected = with_suffix(prefix, ".selected");
      extract_to(stream, sel, extract_paths(selected, !cfg.corpus_tsv.empty()), artifacts);
      write_ids(sel, with_suffix(selected, ".ids"), artifacts);
    }
    {
      ScoreReader reader(scores);
      const auto weights = with_suffix(prefix, ".weights");
      emit_weights(records_of(reader), score_records(scores), weights);
      artifacts.add(weights);
    }
    const auto echoed = with_suffix(prefix, ".config");
    cfg.to_kv().save(echoed);
    artifacts.add(echoed);
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Filter noisy parallel corpora by dual conditional cross-entropy and domain fit.",
               "parafilter");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string log_level = "info";
  auto* log_option = app.add_option("--log-level", log_level, "error, warn, info or debug");
  log_option->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  TrainLm train_lm;
  TrainTm train_tm;
  Score score;
  Select select;
  Weights weights;
  Corrupt corrupt;
  Evaluate evaluate;
  Stats stats;
  Pipeline pipeline;
  auto* c_train_lm = app.add_subcommand("train-lm", "train an add-k n-gram language model");
  auto* c_train_tm = app.add_subcommand("train-tm", "train an IBM Model 1 word-translation table");
  auto* c_score = app.add_subcommand("score", "score a candidate corpus");
  auto* c_select = app.add_subcommand("select", "extract the best-scoring pairs");
  auto* c_weights = app.add_subcommand("weights", "write per-sentence training weights");
  auto* c_corrupt = app.add_subcommand("corrupt", "inject labeled synthetic noise");
  auto* c_evaluate = app.add_subcommand("evaluate", "measure how well scores find the noise");
  auto* c_stats = app.add_subcommand("stats", "summarize a score file");
  auto* c_pipeline = app.add_subcommand("pipeline", "train, score, select and weight from a config");
  train_lm.add_to(c_train_lm);
  train_tm.add_to(c_train_tm);
  score.add_to(c_score);
  select.add_to(c_select);
  weights.add_to(c_weights);
  corrupt.add_to(c_corrupt);
  evaluate.add_to(c_evaluate);
  stats.add_to(c_stats);
  pipeline.add_to(c_pipeline);

  Artifacts artifacts;
  const auto saved_level = log_threshold();
  int code = 0;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    log_threshold() = parse_log_level(log_level);
    if (c_train_lm->parsed()) train_lm.run(*c_train_lm, artifacts);
    else if (c_train_tm->parsed()) train_tm.run(*c_train_tm, artifacts);
    else if (c_score->parsed()) score.run(*c_score, artifacts);
    else if (c_select->parsed()) select.run(*c_select, artifacts);
    else if (c_weights->parsed()) weights.run(*c_weights, artifacts, out);
    else if (c_corrupt->parsed()) corrupt.run(*c_corrupt, artifacts);
    else if (c_evaluate->parsed()) evaluate.run(*c_evaluate, artifacts);
    else if (c_stats->parsed()) stats.run(artifacts, out);
    else if (c_pipeline->parsed()) pipeline.run(artifacts, log_option->count() > 0);
  } catch (const CLI::ParseError& e) {
    code = app.exit(e, out, err);
    if (code != 0) code = 2;
  } catch (const UsageError& e) {
    err << "parafilter: usage error: " << e.what() << '\n';
    code = 2;
  } catch (const ConfigError& e) {
    err << "parafilter: configuration error: " << e.what() << '\n';
    code = 2;
  } catch (const std::exception& e) {
    err << "parafilter: error: " << e.what() << '\n';
    code = 1;
  }
  if (code != 0) artifacts.remove_all();
  log_threshold() = saved_level;
  return code;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace parafilter::cli
