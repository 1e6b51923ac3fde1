#include "revdiff/analytics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "revdiff/aligner.h"
#include "revdiff/error.h"
#include "revdiff/timeparse.h"
#include "text_util.h"

namespace revdiff {

double ActionStats::percent(std::size_t count) const {
  if (total_sentences == 0) return 0.0;
  return 100.0 * static_cast<double>(count) / static_cast<double>(total_sentences);
}

ActionStats summarize_actions(const Store& store) {
  ActionStats stats;
  std::map<std::tuple<std::string, std::string, std::int64_t>, std::size_t> lengths;
  for (const PairSummary& s : store.pair_summaries()) {
    ++stats.pairs;
    stats.edits += s.num_sentences_changed;
    stats.additions += s.num_sentences_added;
    stats.deletions += s.num_sentences_removed;
    stats.refactors += s.num_refactors;
    lengths[{s.pair.source, s.pair.a_id, s.pair.v_old_id}] = s.num_sentences_old;
    lengths[{s.pair.source, s.pair.a_id, s.pair.v_new_id}] = s.num_sentences_new;
  }
  for (const auto& [key, n] : lengths) stats.total_sentences += n;
  return stats;
}

std::vector<VersionDynamics> version_dynamics(const Store& store) {
  std::map<std::int64_t, VersionDynamics> rows;
  for (const PairSummary& s : store.pair_summaries()) {
    VersionDynamics& r = rows[s.pair.v_old_id];
    r.version = s.pair.v_old_id;
    ++r.pairs;
    r.old_sentences += s.num_sentences_old;
    r.new_sentences += s.num_sentences_new;
    r.edited += s.num_sentences_changed;
    r.deleted += s.num_sentences_removed;
    r.added += s.num_sentences_added;
  }
  auto frac = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  std::vector<VersionDynamics> out;
  out.reserve(rows.size());
  for (auto& [k, r] : rows) {
    r.edit_fraction = frac(r.edited, r.old_sentences);
    r.delete_fraction = frac(r.deleted, r.old_sentences);
    r.add_fraction = frac(r.added, r.new_sentences);
    out.push_back(r);
  }
  return out;
}

std::size_t position_decile(std::size_t idx, std::size_t len) {
  if (idx == 0 || len == 0 || idx > len) {
    throw InvalidArgument("position " + std::to_string(idx) + " outside 1.." +
                          std::to_string(len));
  }
  return kDeciles * (idx - 1) / len;
}

std::vector<PositionRow> position_distribution(const Store& store) {
  static const std::vector<std::string> kActions = {"edit", "deletion", "unchanged",
                                                    "refactor", "addition"};
  std::map<std::string, PositionRow> rows;
  for (const auto& a : kActions) rows[a].action = a;
  auto add = [&](const std::string& action, std::size_t idx, std::size_t len) {
    PositionRow& r = rows[action];
    ++r.counts[position_decile(idx, len)];
    ++r.total;
  };

  std::map<PairKey, PairSummary> summaries;
  for (PairSummary& s : store.pair_summaries()) summaries.emplace(s.pair, std::move(s));

  for (const DiffRecord& d : store.sentence_diffs()) {
    auto it = summaries.find(d.pair);
    if (it == summaries.end()) continue;
    const PairSummary& s = it->second;
    if (!d.tag_old.empty()) {
      const SentenceTag tag = SentenceTag::parse(d.tag_old);
      const char* action = tag.op == TagOp::kRemoved   ? "deletion"
                           : tag.is_changed_match()    ? "edit"
                                                       : "unchanged";
      add(action, d.sentence_id, s.num_sentences_old);
    }
    if (!d.tag_new.empty() && SentenceTag::parse(d.tag_new).op == TagOp::kAdded) {
      add("addition", d.sentence_id, s.num_sentences_new);
    }
  }
  for (const RefactorRecord& r : store.refactors()) {
    auto it = summaries.find(r.pair);
    if (it == summaries.end()) continue;
    add("refactor", r.old_idx, it->second.num_sentences_old);
  }

  std::vector<PositionRow> out;
  for (const auto& a : kActions) {
    PositionRow& r = rows[a];
    if (r.total == 0) continue;
    for (std::size_t k = 0; k < kDeciles; ++k) {
      r.percent[k] = 100.0 * static_cast<double>(r.counts[k]) / static_cast<double>(r.total);
    }
    out.push_back(r);
  }
  return out;
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

UpdateTimeStats update_time_stats(const Store& store) {
  UpdateTimeStats stats;
  std::map<std::string, std::vector<double>> hours;
  for (const ArticleKey& key : store.article_keys()) {
    const std::vector<ArticleVersion> versions = store.versions(key);
    for (std::size_t i = 1; i < versions.size(); ++i) {
      const auto a = parse_rfc3339(versions[i - 1].created);
      const auto b = parse_rfc3339(versions[i].created);
      if (!a || !b || *b < *a) {
        ++stats.warnings;
        continue;
      }
      hours[key.source].push_back((*b - *a) / 3600.0);
    }
  }
  for (auto& [source, h] : hours) {
    std::sort(h.begin(), h.end());
    stats.sources.push_back(
        {source, h.size(), quantile(h, 0.5), quantile(h, 0.25), quantile(h, 0.75)});
  }
  return stats;
}

const std::vector<std::string>& correction_lexicon() {
  static const std::vector<std::string> lex = {
      "was corrected", "revised", "clarification", "earlier error", "version", "article"};
  return lex;
}

const std::vector<std::string>& contributor_lexicon() {
  static const std::vector<std::string> lex = {
      "reporting by", "additional reporting", "contributed reporting", "editing by"};
  return lex;
}

SpecialFlags flag_special_sentences(std::string_view sentence, FlagMode mode) {
  const std::string lower = text::to_lower(sentence);
  auto hits = [&](const std::vector<std::string>& lex) {
    std::size_t n = 0;
    for (const auto& phrase : lex) {
      if (lower.find(phrase) != std::string::npos) ++n;
    }
    return n;
  };
  SpecialFlags flags;
  const std::size_t correction_hits = hits(correction_lexicon());
  if (mode == FlagMode::kRaw) {
    flags.correction = correction_hits >= 1;
  } else {
    const std::size_t start = lower.find_first_not_of(" \t\"'");
    const bool prefixed =
        start != std::string::npos && lower.compare(start, 10, "correction") == 0;
    flags.correction = prefixed || correction_hits >= 2;
  }
  flags.contributor = hits(contributor_lexicon()) >= 1;
  return flags;
}

SpecialSentenceCounts count_special_additions(const Store& store, FlagMode mode) {
  SpecialSentenceCounts counts;
  for (const DiffRecord& d : store.sentence_diffs()) {
    if (d.tag_new.empty() || SentenceTag::parse(d.tag_new).op != TagOp::kAdded) continue;
    ++counts.added;
    const SpecialFlags f = flag_special_sentences(d.sent_new, mode);
    counts.corrections += f.correction;
    counts.contributors += f.contributor;
  }
  return counts;
}

}  // namespace revdiff
