#ifndef REVDIFF_ALIGNER_H_
#define REVDIFF_ALIGNER_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revdiff/segmenter.h"
#include "revdiff/similarity.h"

namespace revdiff {

// Similarity cutoff; a sentence matches when its best score is strictly
// greater than the threshold.
class MatchThreshold {
 public:
  explicit MatchThreshold(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// Directional sentence score of x against y.
using SentenceScorer = std::function<double(const TokenSeq&, const TokenSeq&)>;

// A segmented version with the lemmatized token sequence of every sentence.
struct PreparedDocument {
  SentenceList sentences;
  std::vector<TokenSeq> tokens;

  std::size_t size() const { return sentences.size(); }

  static PreparedDocument from_sentences(SentenceList sentences,
                                         const Lemmatizer& lemmatizer = {});
  static PreparedDocument from_text(std::string_view raw,
                                    const Lemmatizer& lemmatizer = {});
};

// scores[i][j] = sim(source_i, target_j), 0-based.
using ScoreMatrix = std::vector<std::vector<double>>;

ScoreMatrix directional_scores(const PreparedDocument& source,
                               const PreparedDocument& target,
                               const SentenceScorer& sim);

// Best target per source sentence. Indices are 1-based.
class DirectionalMap {
 public:
  DirectionalMap() = default;
  DirectionalMap(std::vector<std::optional<std::size_t>> targets,
                 std::vector<double> best_scores);

  std::size_t size() const { return targets_.size(); }
  // Matched target of 1-based source index, nullopt for no match.
  std::optional<std::size_t> target(std::size_t source_index) const;
  double best_score(std::size_t source_index) const;

  bool operator==(const DirectionalMap&) const = default;

 private:
  std::vector<std::optional<std::size_t>> targets_;
  std::vector<double> best_scores_;
};

// Argmax ties go to the target nearest the source position, then to the
// smaller index. Self-diffs of documents with repeated sentences thus map
// every sentence to itself.
DirectionalMap match_directional(const ScoreMatrix& scores, MatchThreshold t);
DirectionalMap match_directional(const PreparedDocument& source,
                                 const PreparedDocument& target,
                                 const SentenceScorer& sim, MatchThreshold t);

enum class Provenance { kForward, kBackward, kBoth };

struct MatchEdge {
  std::size_t old_idx = 0;
  std::size_t new_idx = 0;
  double score = 0.0;
  Provenance provenance = Provenance::kForward;

  bool operator==(const MatchEdge&) const = default;
};

// Union of both directional maps, edges sorted by (old_idx, new_idx).
class MatchGraph {
 public:
  MatchGraph() = default;

  const std::vector<MatchEdge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  // Ascending counterpart indices of a 1-based sentence.
  std::vector<std::size_t> new_neighbors(std::size_t old_idx) const;
  std::vector<std::size_t> old_neighbors(std::size_t new_idx) const;

  friend MatchGraph build_match_graph(const DirectionalMap& fwd,
                                      const DirectionalMap& bwd);

 private:
  std::vector<MatchEdge> edges_;
};

// fwd maps old -> new, bwd maps new -> old. An edge carries the larger of
// its directional scores.
MatchGraph build_match_graph(const DirectionalMap& fwd, const DirectionalMap& bwd);

enum class TagOp { kMatched, kAdded, kRemoved };
enum class Change { kChanged, kUnchanged };

// Per-sentence label: "A" | "R" | "M" idx {idx} ["C"|"U"].
struct SentenceTag {
  TagOp op = TagOp::kAdded;
  std::vector<std::size_t> matched;
  // Always set by derive_tags; parse() leaves it empty when the text omits it.
  std::optional<Change> change;

  static SentenceTag added() { return {TagOp::kAdded, {}, std::nullopt}; }
  static SentenceTag removed() { return {TagOp::kRemoved, {}, std::nullopt}; }
  static SentenceTag matched_to(std::vector<std::size_t> indices, Change c);

  bool is_changed_match() const {
    return op == TagOp::kMatched && change == Change::kChanged;
  }

  std::string serialize() const;
  static SentenceTag parse(std::string_view text);

  // Equality where a missing change component on `pattern` matches anything.
  bool matches(const SentenceTag& pattern) const;

  bool operator==(const SentenceTag&) const = default;
};

// U iff the normalized texts are identical.
Change classify_change(std::string_view s_old, std::string_view s_new);

struct TagLists {
  std::vector<SentenceTag> old_tags;
  std::vector<SentenceTag> new_tags;
};

TagLists derive_tags(const SentenceList& v_old, const SentenceList& v_new,
                     const MatchGraph& graph);

enum class EditKind { kInsert, kDelete, kReplace };

std::string_view to_string(EditKind kind);

// Half-open 0-based token spans.
struct AtomicEdit {
  EditKind kind = EditKind::kReplace;
  std::size_t old_begin = 0;
  std::size_t old_end = 0;
  std::size_t new_begin = 0;
  std::size_t new_end = 0;

  bool operator==(const AtomicEdit&) const = default;
};

// Token-level LCS alignment; maximal non-common runs become edits.
std::vector<AtomicEdit> word_diff(const TokenSeq& s_old, const TokenSeq& s_new);

// Rebuilds the new token list from the old one and the edit list.
std::vector<std::string> apply_word_edits(
    const std::vector<std::string>& old_tokens,
    const std::vector<std::string>& new_tokens,
    std::span<const AtomicEdit> edits);

// One gold or predicted match edge, keyed by version pair.
struct EdgeKey {
  std::size_t pair = 0;
  std::size_t old_idx = 0;
  std::size_t new_idx = 0;

  auto operator<=>(const EdgeKey&) const = default;
};

struct MatchScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Empty-vs-empty scores 1.0 on all three.
MatchScores match_f1(const std::set<EdgeKey>& predicted,
                     const std::set<EdgeKey>& gold);

// A version pair with hand-annotated match edges (1-based).
struct AnnotatedPair {
  std::string article_id;
  std::vector<std::string> old_sentences;
  std::vector<std::string> new_sentences;
  std::vector<std::pair<std::size_t, std::size_t>> gold;
};

// JSONL, one object per line:
// {"article_id": str, "old": [str], "new": [str], "gold": [[i, j], ...]}
std::vector<AnnotatedPair> load_annotated_pairs(const std::filesystem::path& path);

struct CalibrationResult {
  double threshold = 0.0;
  double tuning_f1 = 0.0;
  MatchScores heldout;
  std::vector<std::string> tuning_ids;
  std::vector<std::string> heldout_ids;
  // (threshold, tuning F1) for every grid point.
  std::vector<std::pair<double, double>> curve;
};

// Grid points k/20 for k = 0..20.
std::vector<double> default_threshold_grid();

// Splits the fixtures 50/50 by a stable hash of article_id, picks the grid
// threshold with the best tuning-half match F1 (ties to the smaller value)
// and reports F1 on the held-out half.
CalibrationResult calibrate_threshold(std::span<const AnnotatedPair> fixtures,
                                      const SentenceScorer& sim,
                                      std::span<const double> grid,
                                      const Lemmatizer& lemmatizer = {});

// 64-bit FNV-1a; stable across runs and platforms.
std::uint64_t stable_hash(std::string_view s);

}  // namespace revdiff

#endif  // REVDIFF_ALIGNER_H_
