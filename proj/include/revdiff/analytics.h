#ifndef REVDIFF_ANALYTICS_H_
#define REVDIFF_ANALYTICS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "revdiff/store.h"

namespace revdiff {

// Corpus-wide action totals. Percentages use total_sentences as the base:
// the sentence count of every distinct version that took part in a diffed
// pair, each version counted once.
struct ActionStats {
  std::size_t edits = 0;      // old sentences tagged M ... C
  std::size_t additions = 0;  // new sentences tagged A
  std::size_t deletions = 0;  // old sentences tagged R
  std::size_t refactors = 0;  // removed crossing edges
  std::size_t pairs = 0;
  std::size_t total_sentences = 0;

  double percent(std::size_t count) const;

  bool operator==(const ActionStats&) const = default;
};

// Reads the cached per-pair summaries, not the tag rows.
ActionStats summarize_actions(const Store& store);

struct VersionDynamics {
  std::int64_t version = 0;  // v_old_id of the pairs in this row
  std::size_t pairs = 0;
  std::size_t old_sentences = 0;
  std::size_t new_sentences = 0;
  std::size_t edited = 0;
  std::size_t deleted = 0;
  std::size_t added = 0;
  // edited and deleted over old_sentences, added over new_sentences.
  double edit_fraction = 0.0;
  double delete_fraction = 0.0;
  double add_fraction = 0.0;
};

// One row per old version id, ascending.
std::vector<VersionDynamics> version_dynamics(const Store& store);

inline constexpr std::size_t kDeciles = 10;

struct PositionRow {
  std::string action;  // edit, deletion, unchanged, refactor, addition
  std::size_t total = 0;
  std::array<std::size_t, kDeciles> counts{};
  std::array<double, kDeciles> percent{};
};

// 0-based decile of 1-based position idx in a document of len sentences.
std::size_t position_decile(std::size_t idx, std::size_t len);

// Actions with no occurrences are omitted. Additions are placed by their
// position in the new version, everything else by the old version.
std::vector<PositionRow> position_distribution(const Store& store);

struct UpdateTimeRow {
  std::string source;
  std::size_t intervals = 0;
  double median_hours = 0.0;
  double q1_hours = 0.0;
  double q3_hours = 0.0;
};

struct UpdateTimeStats {
  std::vector<UpdateTimeRow> sources;  // sorted by source
  // Adjacent versions with a decreasing or unparsable timestamp.
  std::size_t warnings = 0;
};

// Interval between consecutive stored versions of each article.
UpdateTimeStats update_time_stats(const Store& store);

// Linear interpolation between closest ranks; `sorted` must be non-empty.
double quantile(const std::vector<double>& sorted, double p);

enum class FlagMode {
  kStrict,  // two distinct correction phrases, or a leading "correction"
  kRaw,     // any single correction phrase
};

struct SpecialFlags {
  bool correction = false;
  bool contributor = false;

  bool operator==(const SpecialFlags&) const = default;
};

const std::vector<std::string>& correction_lexicon();
const std::vector<std::string>& contributor_lexicon();

SpecialFlags flag_special_sentences(std::string_view sentence,
                                    FlagMode mode = FlagMode::kStrict);

struct SpecialSentenceCounts {
  std::size_t added = 0;
  std::size_t corrections = 0;
  std::size_t contributors = 0;
};

// Flags over every added sentence in the store.
SpecialSentenceCounts count_special_additions(const Store& store,
                                              FlagMode mode = FlagMode::kStrict);

}  // namespace revdiff

#endif  // REVDIFF_ANALYTICS_H_
