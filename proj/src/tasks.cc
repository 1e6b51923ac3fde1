#include "revdiff/tasks.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include "json.hpp"
#include "revdiff/aligner.h"
#include "revdiff/error.h"
#include "revdiff/segmenter.h"

namespace revdiff {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Next stored version id after `version`, if any.
std::optional<std::int64_t> next_version(const std::vector<ArticleVersion>& versions,
                                         std::int64_t version) {
  for (const ArticleVersion& v : versions) {
    if (v.version_id > version) return v.version_id;
  }
  return std::nullopt;
}

const ArticleVersion* find_version(const std::vector<ArticleVersion>& versions,
                                   std::int64_t version) {
  for (const ArticleVersion& v : versions) {
    if (v.version_id == version) return &v;
  }
  return nullptr;
}

// Caches versions() per article while walking sorted keys.
class VersionCache {
 public:
  explicit VersionCache(const Store& store) : store_(store) {}

  const std::vector<ArticleVersion>& get(const DocRef& doc) {
    ArticleKey key{doc.source, doc.a_id};
    if (!(key == key_) || !loaded_) {
      versions_ = store_.versions(key);
      key_ = std::move(key);
      loaded_ = true;
    }
    return versions_;
  }

 private:
  const Store& store_;
  ArticleKey key_;
  bool loaded_ = false;
  std::vector<ArticleVersion> versions_;
};

std::string describe(const DocRef& doc) {
  return doc.source + "/" + doc.a_id + " v" + std::to_string(doc.version_id);
}

std::string doc_id(std::string_view task, const DocRef& doc) {
  return std::string(task) + ":" + doc.source + "/" + doc.a_id + "/" +
         std::to_string(doc.version_id);
}

}  // namespace

Bin bin_count(std::size_t k) {
  if (k == 0) return Bin::kLow;
  if (k < 3) return Bin::kMedium;
  return Bin::kHigh;
}

std::string_view to_string(Bin b) {
  switch (b) {
    case Bin::kLow: return "low";
    case Bin::kMedium: return "medium";
    case Bin::kHigh: return "high";
  }
  return "";
}

std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::kDeletion: return "deletion";
    case Operation::kEdit: return "edit";
    case Operation::kUnchanged: return "unchanged";
  }
  return "";
}

std::string_view to_string(RefactorLabel r) {
  switch (r) {
    case RefactorLabel::kUp: return "up";
    case RefactorLabel::kDown: return "down";
    case RefactorLabel::kUnchanged: return "unchanged";
  }
  return "";
}

std::vector<std::string> default_breaking_sources() {
  return {"nyt", "ap", "washpo", "bbc", "independent", "guardian", "reuters"};
}

std::vector<DocRef> filter_breaking(const Store& store, const BreakingFilter& filter) {
  std::set<std::string> allowed;
  for (const auto& s : filter.sources) allowed.insert(ascii_lower(s));

  std::vector<DocRef> out;
  for (const ArticleKey& key : store.article_keys()) {
    if (!allowed.contains(ascii_lower(key.source))) continue;
    for (const ArticleVersion& v : store.versions(key)) {
      if (v.version_id >= filter.version_limit) continue;
      const std::size_t n = split_sentences(v.text).size();
      if (n < filter.min_sentences || n > filter.max_sentences) continue;
      out.push_back({key.source, key.a_id, v.version_id});
    }
  }
  return out;
}

std::vector<Task1Example> build_task1(const Store& store, const std::vector<DocRef>& keys) {
  VersionCache cache(store);
  std::vector<Task1Example> out;
  for (const DocRef& doc : keys) {
    const auto& versions = cache.get(doc);
    const ArticleVersion* v = find_version(versions, doc.version_id);
    if (v == nullptr) continue;
    out.push_back({doc, v->text, next_version(versions, doc.version_id) ? 1 : 0});
  }
  return out;
}

std::array<Bin, 4> Task2Example::bins() const {
  return {bin_count(counts.additions), bin_count(counts.deletions),
          bin_count(counts.edits), bin_count(counts.refactors)};
}

TaskBuild<Task2Example> build_task2(const Store& store, const std::vector<DocRef>& keys) {
  std::map<PairKey, PairSummary> summaries;
  for (PairSummary& s : store.pair_summaries()) summaries.emplace(s.pair, std::move(s));

  VersionCache cache(store);
  TaskBuild<Task2Example> out;
  for (const DocRef& doc : keys) {
    const auto& versions = cache.get(doc);
    const ArticleVersion* v = find_version(versions, doc.version_id);
    const auto next = next_version(versions, doc.version_id);
    auto it = next ? summaries.find(doc.successor_pair(*next)) : summaries.end();
    if (v == nullptr || it == summaries.end()) {
      out.warnings.push_back(describe(doc) + ": no diff to a next version");
      continue;
    }
    const PairSummary& s = it->second;
    out.examples.push_back({doc, v->text,
                            {s.num_sentences_added, s.num_sentences_removed,
                             s.num_sentences_changed, s.num_refactors}});
  }
  return out;
}

std::vector<Task3Label> task3_labels(const std::vector<DiffRecord>& rows,
                                     const std::vector<RefactorRecord>& refactors,
                                     const Task3Options& options) {
  std::vector<SentenceTag> old_tags;
  std::vector<std::size_t> added;  // new-side positions of A tags
  std::size_t new_len = 0;
  for (const DiffRecord& r : rows) {
    if (!r.tag_old.empty()) old_tags.push_back(SentenceTag::parse(r.tag_old));
    if (!r.tag_new.empty()) {
      ++new_len;
      if (SentenceTag::parse(r.tag_new).op == TagOp::kAdded) added.push_back(r.sentence_id);
    }
  }

  // Smallest matched new index per old sentence; 0 when not matched.
  std::vector<std::size_t> anchor(old_tags.size(), 0);
  for (std::size_t i = 0; i < old_tags.size(); ++i) {
    if (old_tags[i].op == TagOp::kMatched && !old_tags[i].matched.empty()) {
      anchor[i] = *std::min_element(old_tags[i].matched.begin(), old_tags[i].matched.end());
    }
  }
  auto between = [&](std::size_t a, std::size_t b) {
    const std::size_t lo = std::min(a, b), hi = std::max(a, b);
    const auto n = std::count_if(added.begin(), added.end(),
                                 [&](std::size_t p) { return p > lo && p < hi; });
    return static_cast<std::size_t>(n) >= options.min_additions;
  };

  std::vector<Task3Label> labels(old_tags.size());
  for (std::size_t i = 0; i < old_tags.size(); ++i) {
    Task3Label& l = labels[i];
    const SentenceTag& tag = old_tags[i];
    if (tag.op == TagOp::kRemoved) {
      l.operation = Operation::kDeletion;
    } else {
      l.operation = tag.is_changed_match() ? Operation::kEdit : Operation::kUnchanged;
    }

    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    for (const RefactorRecord& r : refactors) {
      if (r.old_idx != i + 1 || r.removal_rank >= best_rank) continue;
      best_rank = r.removal_rank;
      l.refactor = r.direction == "up" ? RefactorLabel::kUp : RefactorLabel::kDown;
    }

    if (anchor[i] == 0) continue;
    std::size_t prev = 0;
    for (std::size_t j = i; j-- > 0;) {
      if (anchor[j] != 0) {
        prev = anchor[j];
        break;
      }
    }
    std::size_t next = new_len + 1;
    for (std::size_t j = i + 1; j < old_tags.size(); ++j) {
      if (anchor[j] != 0) {
        next = anchor[j];
        break;
      }
    }
    l.addition_above = between(prev, anchor[i]);
    l.addition_below = between(anchor[i], next);
  }
  return labels;
}

TaskBuild<Task3Example> build_task3(const Store& store, const std::vector<DocRef>& keys,
                                    const Task3Options& options) {
  VersionCache cache(store);
  const std::vector<PairKey> diffed = store.diffed_pairs();
  const std::set<PairKey> pairs(diffed.begin(), diffed.end());
  TaskBuild<Task3Example> out;
  for (const DocRef& doc : keys) {
    const auto next = next_version(cache.get(doc), doc.version_id);
    if (!next || !pairs.contains(doc.successor_pair(*next))) {
      out.warnings.push_back(describe(doc) + ": no diff to a next version");
      continue;
    }
    const PairKey pair = doc.successor_pair(*next);
    const std::vector<DiffRecord> rows = store.sentence_diffs(pair);
    const std::vector<Task3Label> labels = task3_labels(rows, store.refactors(pair), options);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      out.examples.push_back({doc, i + 1, rows[i].sent_old, labels[i]});
    }
  }
  return out;
}

std::string split_for(const DocRef& doc) {
  return stable_hash(doc.source + '\x1f' + doc.a_id) % 10 < 8 ? "train" : "test";
}

std::vector<DatasetRow> to_rows(const std::vector<Task1Example>& examples) {
  std::vector<DatasetRow> rows;
  for (const auto& e : examples) {
    rows.push_back({doc_id("task1", e.doc), "task1", split_for(e.doc), e.doc, std::nullopt,
                    e.text, {{"next_version", std::to_string(e.label)}}});
  }
  return rows;
}

std::vector<DatasetRow> to_rows(const std::vector<Task2Example>& examples) {
  std::vector<DatasetRow> rows;
  for (const auto& e : examples) {
    const auto b = e.bins();
    rows.push_back({doc_id("task2", e.doc), "task2", split_for(e.doc), e.doc, std::nullopt,
                    e.text,
                    {{"additions", std::string(to_string(b[0]))},
                     {"deletions", std::string(to_string(b[1]))},
                     {"edits", std::string(to_string(b[2]))},
                     {"refactors", std::string(to_string(b[3]))}}});
  }
  return rows;
}

std::vector<DatasetRow> to_rows(const std::vector<Task3Example>& examples) {
  std::vector<DatasetRow> rows;
  for (const auto& e : examples) {
    DatasetRow r{doc_id("task3", e.doc) + "/" + std::to_string(e.sentence_idx), "task3",
                 split_for(e.doc), e.doc, e.sentence_idx, e.sentence, {}};
    r.labels["operation"] = to_string(e.label.operation);
    r.labels["refactor"] = to_string(e.label.refactor);
    if (e.label.addition_above) r.labels["addition_above"] = *e.label.addition_above ? "true" : "false";
    if (e.label.addition_below) r.labels["addition_below"] = *e.label.addition_below ? "true" : "false";
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const DatasetRow& r : rows) {
    ordered_json j;
    j["example_id"] = r.example_id;
    j["task"] = r.task;
    j["split"] = r.split;
    j["source"] = r.doc.source;
    j["a_id"] = r.doc.a_id;
    j["version_id"] = r.doc.version_id;
    if (r.sentence_idx) j["sentence_idx"] = *r.sentence_idx;
    j["text"] = r.text;
    j["labels"] = ordered_json::object();
    for (const auto& [k, v] : r.labels) j["labels"][k] = v;
    out << j.dump() << '\n';
  }
  if (!out) throw Error("write error on " + path.string());
}

std::vector<DatasetRow> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<DatasetRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      DatasetRow r;
      r.example_id = j.at("example_id").get<std::string>();
      r.task = j.at("task").get<std::string>();
      r.split = j.at("split").get<std::string>();
      r.doc.source = j.at("source").get<std::string>();
      r.doc.a_id = j.at("a_id").get<std::string>();
      r.doc.version_id = j.at("version_id").get<std::int64_t>();
      if (j.contains("sentence_idx")) r.sentence_idx = j["sentence_idx"].get<std::size_t>();
      r.text = j.at("text").get<std::string>();
      for (const auto& [k, v] : j.at("labels").items()) r.labels[k] = v.get<std::string>();
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return rows;
}

const std::vector<std::string>& subtask_classes(std::string_view subtask) {
  static const std::vector<std::string> kBinary = {"0", "1"};
  static const std::vector<std::string> kBins = {"low", "medium", "high"};
  static const std::vector<std::string> kOps = {"deletion", "edit", "unchanged"};
  static const std::vector<std::string> kRefactor = {"up", "down", "unchanged"};
  static const std::vector<std::string> kBool = {"false", "true"};
  if (subtask == "next_version") return kBinary;
  if (subtask == "additions" || subtask == "deletions" || subtask == "edits" ||
      subtask == "refactors") {
    return kBins;
  }
  if (subtask == "operation") return kOps;
  if (subtask == "refactor") return kRefactor;
  if (subtask == "addition_above" || subtask == "addition_below") return kBool;
  throw InvalidArgument("unknown subtask '" + std::string(subtask) + "'");
}

const std::vector<std::string>& task_subtasks(std::string_view task) {
  static const std::vector<std::string> kTask1 = {"next_version"};
  static const std::vector<std::string> kTask2 = {"additions", "deletions", "edits",
                                                  "refactors"};
  static const std::vector<std::string> kTask3 = {"operation", "refactor", "addition_above",
                                                  "addition_below"};
  if (task == "task1") return kTask1;
  if (task == "task2") return kTask2;
  if (task == "task3") return kTask3;
  throw InvalidArgument("unknown task '" + std::string(task) + "'");
}

std::vector<std::size_t> downsample_per_class(const std::vector<std::string>& labels,
                                              std::size_t max_per_class,
                                              std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  SeededRng rng(seed);
  std::vector<std::size_t> kept;
  for (auto& [label, idx] : by_class) {
    // Fisher-Yates with the portable draw.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    idx.resize(std::min(idx.size(), max_per_class));
    kept.insert(kept.end(), idx.begin(), idx.end());
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::string baseline_most_popular(const std::vector<std::string>& train_labels,
                                  const std::vector<std::string>& classes) {
  if (train_labels.empty()) throw InvalidArgument("most-popular baseline needs training labels");
  std::vector<std::size_t> counts(classes.size(), 0);
  for (const auto& l : train_labels) {
    auto it = std::find(classes.begin(), classes.end(), l);
    if (it == classes.end()) throw InvalidArgument("label '" + l + "' is not a declared class");
    ++counts[static_cast<std::size_t>(it - classes.begin())];
  }
  const auto best = std::max_element(counts.begin(), counts.end());
  return classes[static_cast<std::size_t>(best - counts.begin())];
}

std::vector<std::string> baseline_random(const std::vector<std::string>& classes,
                                         std::size_t n, std::uint64_t seed) {
  if (classes.empty()) throw InvalidArgument("random baseline needs at least one class");
  SeededRng rng(seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(classes[rng.below(classes.size())]);
  return out;
}

namespace {

struct ClassIndex {
  std::vector<std::size_t> preds;
  std::vector<std::size_t> golds;
};

ClassIndex index_labels(const std::vector<std::string>& preds,
                        const std::vector<std::string>& golds,
                        const std::vector<std::string>& classes) {
  if (preds.size() != golds.size()) {
    throw InvalidArgument("prediction and gold sequences differ in length (" +
                          std::to_string(preds.size()) + " vs " +
                          std::to_string(golds.size()) + ")");
  }
  std::map<std::string, std::size_t> id;
  for (std::size_t c = 0; c < classes.size(); ++c) id.emplace(classes[c], c);
  auto lookup = [&](const std::string& l) {
    auto it = id.find(l);
    if (it == id.end()) throw InvalidArgument("label '" + l + "' is not a declared class");
    return it->second;
  };
  ClassIndex out;
  for (const auto& p : preds) out.preds.push_back(lookup(p));
  for (const auto& g : golds) out.golds.push_back(lookup(g));
  return out;
}

F1Scores f1_indexed(const ClassIndex& ix, const std::vector<std::size_t>& sample,
                    std::size_t n_classes) {
  std::vector<std::size_t> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0);
  for (std::size_t i : sample) {
    const std::size_t p = ix.preds[i], g = ix.golds[i];
    if (p == g) {
      ++tp[p];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  double macro = 0.0;
  std::size_t all_tp = 0, all_err = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const std::size_t denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom > 0) macro += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
    all_tp += tp[c];
    all_err += fp[c] + fn[c];
  }
  F1Scores s;
  s.macro = n_classes == 0 ? 0.0 : 100.0 * macro / static_cast<double>(n_classes);
  const double micro_denom = static_cast<double>(all_tp) + 0.5 * static_cast<double>(all_err);
  s.micro = micro_denom == 0.0 ? 0.0 : 100.0 * static_cast<double>(all_tp) / micro_denom;
  return s;
}

}  // namespace

F1Scores macro_micro_f1(const std::vector<std::string>& preds,
                        const std::vector<std::string>& golds,
                        const std::vector<std::string>& classes) {
  const ClassIndex ix = index_labels(preds, golds, classes);
  std::vector<std::size_t> all(preds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return f1_indexed(ix, all, classes.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

BootstrapResult bootstrap_eval(const std::vector<std::string>& preds,
                               const std::vector<std::string>& golds,
                               const std::vector<std::string>& classes,
                               std::size_t n_resamples, std::uint64_t seed) {
  const ClassIndex ix = index_labels(preds, golds, classes);
  if (preds.empty()) throw InvalidArgument("bootstrap over an empty evaluation set");
  if (n_resamples == 0) throw InvalidArgument("bootstrap needs at least one resample");

  BootstrapResult out;
  out.resamples = n_resamples;
  out.seed = seed;
  std::vector<std::size_t> sample(preds.size());
  for (std::size_t i = 0; i < sample.size(); ++i) sample[i] = i;
  out.full = f1_indexed(ix, sample, classes.size());

  SeededRng rng(seed);
  std::vector<double> macro, micro;
  macro.reserve(n_resamples);
  micro.reserve(n_resamples);
  for (std::size_t r = 0; r < n_resamples; ++r) {
    for (auto& s : sample) s = rng.below(preds.size());
    const F1Scores f = f1_indexed(ix, sample, classes.size());
    macro.push_back(f.macro);
    micro.push_back(f.micro);
  }
  out.macro_median = median(std::move(macro));
  out.micro_median = median(std::move(micro));
  return out;
}

std::string EvalReport::to_json() const {
  ordered_json j;
  j["task"] = task;
  j["predictor"] = predictor;
  j["seed"] = seed;
  j["resamples"] = resamples;
  j["bins"] = "low=[0,1) medium=[1,3) high=[3,inf)";
  j["f1_zero_division"] = 0;
  j["subtasks"] = ordered_json::array();
  for (const SubtaskScore& s : subtasks) {
    ordered_json row;
    row["subtask"] = s.subtask;
    row["examples"] = s.examples;
    row["macro_f1"] = s.scores.full.macro;
    row["micro_f1"] = s.scores.full.micro;
    row["macro_f1_median"] = s.scores.macro_median;
    row["micro_f1_median"] = s.scores.micro_median;
    j["subtasks"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

Predictions read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Predictions preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string id, subtask, label;
    try {
      const json j = json::parse(line);
      id = j.at("example_id").get<std::string>();
      subtask = j.at("subtask").get<std::string>();
      label = j.at("predicted_label").get<std::string>();
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!preds.emplace(std::make_pair(id, subtask), label).second) {
      throw ParseError("duplicate prediction for " + id + " / " + subtask, line_no);
    }
  }
  return preds;
}

void write_predictions(const std::filesystem::path& path, const Predictions& preds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& [key, label] : preds) {
    ordered_json j;
    j["example_id"] = key.first;
    j["subtask"] = key.second;
    j["predicted_label"] = label;
    out << j.dump() << '\n';
  }
}

namespace {

std::string single_task(const std::vector<DatasetRow>& rows) {
  if (rows.empty()) throw InvalidArgument("empty dataset");
  for (const auto& r : rows) {
    if (r.task != rows.front().task) throw InvalidArgument("dataset mixes tasks");
  }
  return rows.front().task;
}

}  // namespace

Predictions baseline_predictions(const std::vector<DatasetRow>& rows, Baseline kind,
                                 std::uint64_t seed) {
  const std::string task = single_task(rows);
  Predictions preds;
  const auto& subtasks = task_subtasks(task);
  for (std::size_t s = 0; s < subtasks.size(); ++s) {
    const std::string& subtask = subtasks[s];
    const auto& classes = subtask_classes(subtask);
    std::vector<std::string> train;
    std::vector<const DatasetRow*> test;
    for (const auto& r : rows) {
      auto it = r.labels.find(subtask);
      if (it == r.labels.end()) continue;
      if (r.split == "test") {
        test.push_back(&r);
      } else {
        train.push_back(it->second);
      }
    }
    if (test.empty()) continue;
    std::vector<std::string> labels;
    if (kind == Baseline::kMostPopular) {
      labels.assign(test.size(), baseline_most_popular(train, classes));
    } else {
      labels = baseline_random(classes, test.size(), seed + s);
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
      preds[{test[i]->example_id, subtask}] = labels[i];
    }
  }
  return preds;
}

EvalReport evaluate(const std::vector<DatasetRow>& rows, const Predictions& preds,
                    std::string predictor, std::size_t n_resamples, std::uint64_t seed) {
  EvalReport report;
  report.task = single_task(rows);
  report.predictor = std::move(predictor);
  report.seed = seed;
  report.resamples = n_resamples;
  for (const std::string& subtask : task_subtasks(report.task)) {
    std::vector<std::string> p, g;
    for (const auto& r : rows) {
      if (r.split != "test") continue;
      auto it = r.labels.find(subtask);
      if (it == r.labels.end()) continue;
      auto pit = preds.find({r.example_id, subtask});
      if (pit == preds.end()) {
        throw Error("no prediction for " + r.example_id + " / " + subtask);
      }
      g.push_back(it->second);
      p.push_back(pit->second);
    }
    if (g.empty()) continue;
    report.subtasks.push_back(
        {subtask, g.size(), bootstrap_eval(p, g, subtask_classes(subtask), n_resamples, seed)});
  }
  return report;
}

}  // namespace revdiff
