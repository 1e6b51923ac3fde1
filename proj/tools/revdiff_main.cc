// Command-line front end: ingest, diff, stats, taskgen, eval, calibrate,
// export, synth.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "revdiff/aligner.h"
#include "revdiff/analytics.h"
#include "revdiff/error.h"
#include "revdiff/ingest.h"
#include "revdiff/pipeline.h"
#include "revdiff/similarity.h"
#include "revdiff/store.h"
#include "revdiff/synthetic.h"
#include "revdiff/tasks.h"

namespace {

using nlohmann::ordered_json;
using namespace revdiff;

struct Options {
  std::string db = "revdiff.db";
  std::string sim = "unigram";
  std::optional<double> threshold;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::string lemmas;

  std::vector<std::string> inputs;
  std::string out;
  std::string fixture;
  std::string dataset;
  std::string predictions;
  std::string baseline;
  std::size_t resamples = 1000;
  int task = 3;
  std::vector<std::string> sources;
  std::size_t max_per_class = 0;
  bool strict_additions = false;
  bool raw_flags = false;
  std::size_t articles = 50;
};

Lemmatizer load_lemmas(const Options& o) {
  return o.lemmas.empty() ? Lemmatizer{} : Lemmatizer::from_file(o.lemmas);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

int run_ingest(const Options& o) {
  Store store = Store::open(o.db);
  std::size_t accepted = 0, duplicates = 0, errors = 0;
  for (const auto& path : o.inputs) {
    const IngestReport r = ingest_jsonl(path, store);
    for (const auto& e : r.errors) std::cerr << path << ": " << e.message << "\n";
    accepted += r.accepted;
    duplicates += r.duplicates;
    errors += r.errors.size();
  }
  std::cout << "accepted " << accepted << ", replaced duplicates " << duplicates
            << ", rejected " << errors << "\n";
  return 0;
}

int run_diff(const Options& o) {
  Store store = Store::open(o.db);
  DiffConfig config;
  config.sim = SentenceSimilarity::parse(o.sim);
  config.threshold = MatchThreshold(o.threshold.value_or(config.sim.default_threshold()));
  config.lemmatizer = load_lemmas(o);
  config.lemma_source = o.lemmas;
  config.workers = o.workers;
  const DiffReport r = diff_corpus(store, config);
  for (const auto& f : r.failures) std::cerr << "failed: " << f << "\n";
  std::cout << "pairs processed " << r.pairs_processed << ", written " << r.pairs_written
            << ", unchanged " << r.pairs_unchanged << ", removed " << r.pairs_removed
            << ", failed " << r.failures.size() << "\n";
  return r.failures.empty() ? 0 : 3;
}

int run_stats(const Options& o) {
  Store store = Store::open(o.db);
  ordered_json j;

  const ActionStats a = summarize_actions(store);
  ordered_json actions;
  actions["pairs"] = a.pairs;
  actions["total_sentences"] = a.total_sentences;
  for (const auto& [name, n] : {std::pair{"edits", a.edits}, std::pair{"additions", a.additions},
                                std::pair{"deletions", a.deletions},
                                std::pair{"refactors", a.refactors}}) {
    actions[name] = {{"count", n}, {"percent", a.percent(n)}};
  }
  j["actions"] = actions;

  j["version_dynamics"] = ordered_json::array();
  for (const auto& r : version_dynamics(store)) {
    j["version_dynamics"].push_back({{"version", r.version},
                                     {"pairs", r.pairs},
                                     {"edit_fraction", r.edit_fraction},
                                     {"add_fraction", r.add_fraction},
                                     {"delete_fraction", r.delete_fraction}});
  }

  j["position_distribution"] = ordered_json::array();
  for (const auto& r : position_distribution(store)) {
    j["position_distribution"].push_back(
        {{"action", r.action}, {"total", r.total}, {"percent", r.percent}});
  }

  const UpdateTimeStats t = update_time_stats(store);
  ordered_json times;
  times["warnings"] = t.warnings;
  times["sources"] = ordered_json::array();
  for (const auto& r : t.sources) {
    times["sources"].push_back({{"source", r.source},
                                {"intervals", r.intervals},
                                {"median_hours", r.median_hours},
                                {"q1_hours", r.q1_hours},
                                {"q3_hours", r.q3_hours}});
  }
  j["update_times"] = times;

  const SpecialSentenceCounts s =
      count_special_additions(store, o.raw_flags ? FlagMode::kRaw : FlagMode::kStrict);
  j["added_sentence_flags"] = {
      {"added", s.added}, {"correction", s.corrections}, {"contributor", s.contributors}};

  write_text(o.out, j.dump(2) + "\n");
  return 0;
}

int run_taskgen(const Options& o) {
  Store store = Store::open(o.db);
  BreakingFilter filter;
  if (!o.sources.empty()) filter.sources = o.sources;
  const std::vector<DocRef> keys = filter_breaking(store, filter);

  std::vector<DatasetRow> rows;
  std::vector<std::string> warnings;
  if (o.task == 1) {
    rows = to_rows(build_task1(store, keys));
  } else if (o.task == 2) {
    auto built = build_task2(store, keys);
    rows = to_rows(built.examples);
    warnings = std::move(built.warnings);
  } else {
    Task3Options t3;
    t3.min_additions = o.strict_additions ? 2 : 1;
    auto built = build_task3(store, keys, t3);
    rows = to_rows(built.examples);
    warnings = std::move(built.warnings);
  }

  if (o.max_per_class > 0) {
    // Balance on the first subtask's label.
    const std::string& subtask = task_subtasks(rows.empty() ? "task1" : rows[0].task)[0];
    std::vector<std::string> labels;
    for (const auto& r : rows) {
      auto it = r.labels.find(subtask);
      labels.push_back(it == r.labels.end() ? "" : it->second);
    }
    std::vector<DatasetRow> kept;
    for (std::size_t i : downsample_per_class(labels, o.max_per_class, o.seed)) {
      kept.push_back(rows[i]);
    }
    rows = std::move(kept);
  }

  if (o.out.empty()) throw InvalidArgument("taskgen needs --out");
  write_dataset(o.out, rows);
  std::cerr << warnings.size() << " keys skipped without a next-version diff\n";
  std::cout << "wrote " << rows.size() << " examples from " << keys.size()
            << " filtered versions to " << o.out << "\n";
  return 0;
}

int run_eval(const Options& o) {
  const std::vector<DatasetRow> rows = read_dataset(o.dataset);
  Predictions preds;
  std::string predictor;
  if (!o.predictions.empty()) {
    preds = read_predictions(o.predictions);
    predictor = "file:" + std::filesystem::path(o.predictions).filename().string();
  } else if (o.baseline == "random") {
    preds = baseline_predictions(rows, Baseline::kRandom, o.seed);
    predictor = "random";
  } else {
    preds = baseline_predictions(rows, Baseline::kMostPopular, o.seed);
    predictor = "most_popular";
  }
  const EvalReport report = evaluate(rows, preds, predictor, o.resamples, o.seed);
  write_text(o.out, report.to_json());
  return 0;
}

int run_calibrate(const Options& o) {
  const std::vector<AnnotatedPair> pairs = load_annotated_pairs(o.fixture);
  const SentenceSimilarity sim = SentenceSimilarity::parse(o.sim);
  const std::vector<double> grid = default_threshold_grid();
  const CalibrationResult r = calibrate_threshold(pairs, sim, grid, load_lemmas(o));

  ordered_json j;
  j["sim"] = sim.describe();
  j["threshold"] = r.threshold;
  j["tuning_f1"] = r.tuning_f1;
  j["heldout"] = {{"precision", r.heldout.precision},
                  {"recall", r.heldout.recall},
                  {"f1", r.heldout.f1}};
  j["tuning_ids"] = r.tuning_ids;
  j["heldout_ids"] = r.heldout_ids;
  j["curve"] = ordered_json::array();
  for (const auto& [t, f] : r.curve) j["curve"].push_back({{"threshold", t}, {"f1", f}});
  write_text(o.out, j.dump(2) + "\n");
  return 0;
}

int run_export(const Options& o) {
  if (o.out.empty()) throw InvalidArgument("export needs --out DIR");
  Store store = Store::open(o.db);
  for (const auto& p : store.export_csv(o.out)) std::cout << p.string() << "\n";
  return 0;
}

int run_synth(const Options& o) {
  CorpusOptions opts;
  opts.articles = o.articles;
  std::string text;
  for (const ArticleVersion& v : synthetic_corpus(o.seed, opts)) {
    ordered_json j;
    j["source"] = v.source;
    j["a_id"] = v.a_id;
    j["version_id"] = v.version_id;
    j["title"] = v.title;
    j["url"] = v.url;
    j["text"] = v.text;
    j["created"] = v.created;
    j["archive_url"] = nullptr;
    text += j.dump() + "\n";
  }
  write_text(o.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentence-level edit extraction for versioned news articles"};
  app.require_subcommand(1);
  Options o;

  auto add_db = [&](CLI::App* c) { c->add_option("--db", o.db, "SQLite store path"); };
  auto add_sim = [&](CLI::App* c) {
    c->add_option("--sim", o.sim,
                  "unigram | ngram:N | embed:PATH | hungarian[:PATH] | bleu:1,2,...");
    c->add_option("--lemmas", o.lemmas, "token<TAB>lemma table");
  };

  auto* ingest = app.add_subcommand("ingest", "Load JSONL article versions into the store");
  add_db(ingest);
  ingest->add_option("inputs", o.inputs, "JSONL files")->required()->check(CLI::ExistingFile);

  auto* diff = app.add_subcommand("diff", "Diff every adjacent version pair");
  add_db(diff);
  add_sim(diff);
  diff->add_option("--threshold", o.threshold, "Match threshold T in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  diff->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Corpus action statistics as JSON");
  add_db(stats);
  stats->add_option("--out", o.out, "Output file (default stdout)");
  stats->add_flag("--raw-flags", o.raw_flags, "Single-phrase correction matching");

  auto* taskgen = app.add_subcommand("taskgen", "Build a prediction-task dataset");
  add_db(taskgen);
  taskgen->add_option("--task", o.task, "1, 2 or 3")->check(CLI::IsMember({1, 2, 3}));
  taskgen->add_option("--out", o.out, "Output JSONL")->required();
  taskgen->add_option("--sources", o.sources, "Source allowlist")->delimiter(',');
  taskgen->add_option("--max-per-class", o.max_per_class, "Downsample the first subtask");
  taskgen->add_option("--seed", o.seed, "Downsampling seed");
  taskgen->add_flag("--strict-additions", o.strict_additions,
                    "Require two or more added sentences for addition labels");

  auto* eval = app.add_subcommand("eval", "Score predictions with bootstrap medians");
  eval->add_option("--dataset", o.dataset, "Task JSONL")->required()->check(CLI::ExistingFile);
  auto* pred_opt = eval->add_option("--predictions", o.predictions, "Predictions JSONL")
                       ->check(CLI::ExistingFile);
  eval->add_option("--baseline", o.baseline, "most_popular | random")
      ->check(CLI::IsMember({"most_popular", "random"}))
      ->excludes(pred_opt);
  eval->add_option("--resamples", o.resamples, "Bootstrap resamples")
      ->check(CLI::PositiveNumber);
  eval->add_option("--seed", o.seed, "Bootstrap seed");
  eval->add_option("--out", o.out, "Report file (default stdout)");

  auto* calibrate = app.add_subcommand("calibrate", "Grid-search the match threshold");
  calibrate->add_option("--fixture", o.fixture, "Annotated pairs JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  add_sim(calibrate);
  calibrate->add_option("--out", o.out, "Result file (default stdout)");

  auto* exp = app.add_subcommand("export", "Write every table as CSV");
  add_db(exp);
  exp->add_option("--out", o.out, "Directory")->required();

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus as JSONL");
  synth->add_option("--seed", o.seed, "Generator seed");
  synth->add_option("--articles", o.articles, "Number of articles");
  synth->add_option("--out", o.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return run_ingest(o);
    if (diff->parsed()) return run_diff(o);
    if (stats->parsed()) return run_stats(o);
    if (taskgen->parsed()) return run_taskgen(o);
    if (eval->parsed()) return run_eval(o);
    if (calibrate->parsed()) return run_calibrate(o);
    if (exp->parsed()) return run_export(o);
    if (synth->parsed()) return run_synth(o);
  } catch (const revdiff::Error& e) {
    std::cerr << "revdiff: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "revdiff: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
