#ifndef REVDIFF_TASKS_H_
#define REVDIFF_TASKS_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revdiff/rng.h"
#include "revdiff/store.h"

namespace revdiff {

// Count bins: low = 0, medium = 1..2, high = 3 and above.
enum class Bin { kLow, kMedium, kHigh };

Bin bin_count(std::size_t k);
std::string_view to_string(Bin b);

// One stored version of one article.
struct DocRef {
  std::string source;
  std::string a_id;
  std::int64_t version_id = 0;

  auto operator<=>(const DocRef&) const = default;
  PairKey successor_pair(std::int64_t next) const {
    return {source, a_id, version_id, next};
  }
};

std::vector<std::string> default_breaking_sources();

struct BreakingFilter {
  std::vector<std::string> sources = default_breaking_sources();  // case-insensitive
  std::size_t min_sentences = 5;
  std::size_t max_sentences = 15;
  std::int64_t version_limit = 20;  // exclusive
};

// Versions that pass the short-breaking-news filter, in key order.
std::vector<DocRef> filter_breaking(const Store& store, const BreakingFilter& filter = {});

struct Task1Example {
  DocRef doc;
  std::string text;
  int label = 0;  // 1 iff a later version of the article is stored
};

std::vector<Task1Example> build_task1(const Store& store, const std::vector<DocRef>& keys);

struct ActionCounts {
  std::size_t additions = 0;
  std::size_t deletions = 0;
  std::size_t edits = 0;
  std::size_t refactors = 0;  // removed edges

  bool operator==(const ActionCounts&) const = default;
};

struct Task2Example {
  DocRef doc;
  std::string text;
  ActionCounts counts;

  // additions, deletions, edits, refactors
  std::array<Bin, 4> bins() const;
};

enum class Operation { kDeletion, kEdit, kUnchanged };
enum class RefactorLabel { kUp, kDown, kUnchanged };

std::string_view to_string(Operation op);
std::string_view to_string(RefactorLabel r);

struct Task3Label {
  Operation operation = Operation::kUnchanged;
  RefactorLabel refactor = RefactorLabel::kUnchanged;
  // Unset for deleted sentences.
  std::optional<bool> addition_above;
  std::optional<bool> addition_below;

  bool operator==(const Task3Label&) const = default;
};

struct Task3Example {
  DocRef doc;
  std::size_t sentence_idx = 0;  // 1-based, old version
  std::string sentence;
  Task3Label label;
};

template <typename T>
struct TaskBuild {
  std::vector<T> examples;
  // Keys skipped because the pair to the next version was never diffed.
  std::vector<std::string> warnings;
};

TaskBuild<Task2Example> build_task2(const Store& store, const std::vector<DocRef>& keys);

struct Task3Options {
  // Additions needed between anchors for a true label. 1 reads "added above"
  // as at least one sentence; 2 is the strict more-than-one reading.
  std::size_t min_additions = 1;
};

TaskBuild<Task3Example> build_task3(const Store& store, const std::vector<DocRef>& keys,
                                    const Task3Options& options = {});

// Task 3 labels for one old version given its stored rows and refactors.
std::vector<Task3Label> task3_labels(const std::vector<DiffRecord>& rows,
                                     const std::vector<RefactorRecord>& refactors,
                                     const Task3Options& options = {});

// Flat example with string labels keyed by subtask, as written to JSONL.
struct DatasetRow {
  std::string example_id;
  std::string task;   // task1, task2, task3
  std::string split;  // train, test
  DocRef doc;
  std::optional<std::size_t> sentence_idx;
  std::string text;
  std::map<std::string, std::string> labels;

  bool operator==(const DatasetRow&) const = default;
};

// 80/20 train/test by a stable hash of the article key.
std::string split_for(const DocRef& doc);

std::vector<DatasetRow> to_rows(const std::vector<Task1Example>& examples);
std::vector<DatasetRow> to_rows(const std::vector<Task2Example>& examples);
std::vector<DatasetRow> to_rows(const std::vector<Task3Example>& examples);

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> read_dataset(const std::filesystem::path& path);

// Declared label set of a subtask, in canonical order.
const std::vector<std::string>& subtask_classes(std::string_view subtask);
// Subtasks of a task, in report order.
const std::vector<std::string>& task_subtasks(std::string_view task);

// Indices kept when each label keeps at most max_per_class examples,
// chosen by a seeded shuffle and returned in ascending order.
std::vector<std::size_t> downsample_per_class(const std::vector<std::string>& labels,
                                              std::size_t max_per_class,
                                              std::uint64_t seed);

// The modal training label; ties go to the class listed first.
std::string baseline_most_popular(const std::vector<std::string>& train_labels,
                                  const std::vector<std::string>& classes);

// n i.i.d. uniform draws from classes.
std::vector<std::string> baseline_random(const std::vector<std::string>& classes,
                                         std::size_t n, std::uint64_t seed);

struct F1Scores {
  double macro = 0.0;  // percent
  double micro = 0.0;  // percent
};

F1Scores macro_micro_f1(const std::vector<std::string>& preds,
                        const std::vector<std::string>& golds,
                        const std::vector<std::string>& classes);

struct BootstrapResult {
  F1Scores full;  // on the unresampled data
  double macro_median = 0.0;
  double micro_median = 0.0;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
};

BootstrapResult bootstrap_eval(const std::vector<std::string>& preds,
                               const std::vector<std::string>& golds,
                               const std::vector<std::string>& classes,
                               std::size_t n_resamples = 1000, std::uint64_t seed = 0);

// Middle value, or the mean of the two middle values.
double median(std::vector<double> values);

struct SubtaskScore {
  std::string subtask;
  std::size_t examples = 0;
  BootstrapResult scores;
};

struct EvalReport {
  std::string task;
  std::string predictor;
  std::uint64_t seed = 0;
  std::size_t resamples = 0;
  std::vector<SubtaskScore> subtasks;

  std::string to_json() const;
};

// (example_id, subtask) -> label
using Predictions = std::map<std::pair<std::string, std::string>, std::string>;

// JSONL lines {"example_id", "subtask", "predicted_label"}.
Predictions read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, const Predictions& preds);

enum class Baseline { kMostPopular, kRandom };

// Baseline predictions for every test row and subtask; most-popular is fit
// on the train rows.
Predictions baseline_predictions(const std::vector<DatasetRow>& rows, Baseline kind,
                                 std::uint64_t seed);

// Scores the test rows of one task. Every labeled (test row, subtask) needs
// a prediction.
EvalReport evaluate(const std::vector<DatasetRow>& rows, const Predictions& preds,
                    std::string predictor, std::size_t n_resamples, std::uint64_t seed);

}  // namespace revdiff

#endif  // REVDIFF_TASKS_H_
