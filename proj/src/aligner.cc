#include "revdiff/aligner.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include "json.hpp"
#include <sstream>

#include "revdiff/error.h"

namespace revdiff {

MatchThreshold::MatchThreshold(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidArgument("match threshold must lie in [0, 1]");
  }
}

PreparedDocument PreparedDocument::from_sentences(SentenceList sentences,
                                                  const Lemmatizer& lemmatizer) {
  PreparedDocument doc;
  doc.tokens.reserve(sentences.size());
  for (const auto& s : sentences.sentences()) {
    doc.tokens.push_back(lemmatizer.apply(tokenize(s)));
  }
  doc.sentences = std::move(sentences);
  return doc;
}

PreparedDocument PreparedDocument::from_text(std::string_view raw,
                                             const Lemmatizer& lemmatizer) {
  return from_sentences(split_sentences(normalize_text(raw)), lemmatizer);
}

ScoreMatrix directional_scores(const PreparedDocument& source,
                               const PreparedDocument& target,
                               const SentenceScorer& sim) {
  ScoreMatrix scores(source.size(), std::vector<double>(target.size(), 0.0));
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = 0; j < target.size(); ++j) {
      scores[i][j] = sim(source.tokens[i], target.tokens[j]);
    }
  }
  return scores;
}

DirectionalMap::DirectionalMap(std::vector<std::optional<std::size_t>> targets,
                               std::vector<double> best_scores)
    : targets_(std::move(targets)), best_scores_(std::move(best_scores)) {
  if (targets_.size() != best_scores_.size()) {
    throw InvalidArgument("directional map: size mismatch");
  }
}

std::optional<std::size_t> DirectionalMap::target(std::size_t source_index) const {
  if (source_index == 0 || source_index > targets_.size()) {
    throw InvalidArgument("directional map: index out of range");
  }
  return targets_[source_index - 1];
}

double DirectionalMap::best_score(std::size_t source_index) const {
  if (source_index == 0 || source_index > best_scores_.size()) {
    throw InvalidArgument("directional map: index out of range");
  }
  return best_scores_[source_index - 1];
}

DirectionalMap match_directional(const ScoreMatrix& scores, MatchThreshold t) {
  std::vector<std::optional<std::size_t>> targets(scores.size());
  std::vector<double> best(scores.size(), 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& row = scores[i];
    if (row.empty()) continue;
    auto distance = [i](std::size_t j) { return j > i ? j - i : i - j; };
    std::size_t arg = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[arg] || (row[j] == row[arg] && distance(j) < distance(arg))) arg = j;
    }
    best[i] = row[arg];
    if (row[arg] > t.value()) targets[i] = arg + 1;
  }
  return DirectionalMap(std::move(targets), std::move(best));
}

DirectionalMap match_directional(const PreparedDocument& source,
                                 const PreparedDocument& target,
                                 const SentenceScorer& sim, MatchThreshold t) {
  return match_directional(directional_scores(source, target, sim), t);
}

std::vector<std::size_t> MatchGraph::new_neighbors(std::size_t old_idx) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges_) {
    if (e.old_idx == old_idx) out.push_back(e.new_idx);
  }
  return out;
}

std::vector<std::size_t> MatchGraph::old_neighbors(std::size_t new_idx) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges_) {
    if (e.new_idx == new_idx) out.push_back(e.old_idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MatchGraph build_match_graph(const DirectionalMap& fwd, const DirectionalMap& bwd) {
  std::map<std::pair<std::size_t, std::size_t>, MatchEdge> merged;
  for (std::size_t i = 1; i <= fwd.size(); ++i) {
    if (auto j = fwd.target(i)) {
      merged[{i, *j}] = MatchEdge{i, *j, fwd.best_score(i), Provenance::kForward};
    }
  }
  for (std::size_t j = 1; j <= bwd.size(); ++j) {
    auto i = bwd.target(j);
    if (!i) continue;
    auto [it, inserted] = merged.try_emplace(
        {*i, j}, MatchEdge{*i, j, bwd.best_score(j), Provenance::kBackward});
    if (!inserted) {
      it->second.provenance = Provenance::kBoth;
      it->second.score = std::max(it->second.score, bwd.best_score(j));
    }
  }
  MatchGraph g;
  g.edges_.reserve(merged.size());
  for (auto& [key, edge] : merged) g.edges_.push_back(edge);
  return g;
}

SentenceTag SentenceTag::matched_to(std::vector<std::size_t> indices, Change c) {
  if (indices.empty()) throw InvalidArgument("matched tag needs an index");
  std::sort(indices.begin(), indices.end());
  return {TagOp::kMatched, std::move(indices), c};
}

std::string SentenceTag::serialize() const {
  switch (op) {
    case TagOp::kAdded:
      return "A";
    case TagOp::kRemoved:
      return "R";
    case TagOp::kMatched:
      break;
  }
  std::string out = "M";
  for (std::size_t idx : matched) {
    out.push_back(' ');
    out += std::to_string(idx);
  }
  if (change) out += *change == Change::kChanged ? " C" : " U";
  return out;
}

SentenceTag SentenceTag::parse(std::string_view text) {
  auto fail = [&] {
    return ParseError("malformed sentence tag '" + std::string(text) + "'", 0);
  };
  if (text == "A") return added();
  if (text == "R") return removed();
  if (text.size() < 3 || text.substr(0, 2) != "M ") throw fail();

  SentenceTag tag{TagOp::kMatched, {}, std::nullopt};
  std::size_t i = 2;
  while (i < text.size()) {
    const std::size_t end = std::min(text.find(' ', i), text.size());
    const std::string_view field = text.substr(i, end - i);
    if (field.empty()) throw fail();
    const bool last = end == text.size();
    if (field == "C" || field == "U") {
      if (!last || tag.matched.empty()) throw fail();
      tag.change = field == "C" ? Change::kChanged : Change::kUnchanged;
    } else {
      if (field.front() == '0' ||
          !std::all_of(field.begin(), field.end(),
                       [](char c) { return c >= '0' && c <= '9'; })) {
        throw fail();
      }
      const std::size_t idx = std::stoul(std::string(field));
      if (!tag.matched.empty() && idx <= tag.matched.back()) throw fail();
      tag.matched.push_back(idx);
    }
    i = end + 1;
  }
  if (tag.matched.empty()) throw fail();
  return tag;
}

bool SentenceTag::matches(const SentenceTag& pattern) const {
  if (op != pattern.op || matched != pattern.matched) return false;
  return !pattern.change || change == pattern.change;
}

Change classify_change(std::string_view s_old, std::string_view s_new) {
  return normalize_text(s_old) == normalize_text(s_new) ? Change::kUnchanged
                                                         : Change::kChanged;
}

namespace {

Change classify_group(const std::string& sentence,
                      const SentenceList& other,
                      const std::vector<std::size_t>& counterparts) {
  if (counterparts.size() == 1) {
    return classify_change(sentence, other.at(counterparts.front()));
  }
  std::string joined;
  for (std::size_t idx : counterparts) {
    if (!joined.empty()) joined.push_back(' ');
    joined += other.at(idx);
  }
  return classify_change(sentence, joined);
}

}  // namespace

TagLists derive_tags(const SentenceList& v_old, const SentenceList& v_new,
                     const MatchGraph& graph) {
  std::vector<std::vector<std::size_t>> old_adj(v_old.size());
  std::vector<std::vector<std::size_t>> new_adj(v_new.size());
  for (const auto& e : graph.edges()) {
    if (e.old_idx == 0 || e.old_idx > v_old.size() || e.new_idx == 0 ||
        e.new_idx > v_new.size()) {
      throw InvalidArgument("match graph edge out of range");
    }
    old_adj[e.old_idx - 1].push_back(e.new_idx);
    new_adj[e.new_idx - 1].push_back(e.old_idx);
  }

  TagLists tags;
  tags.old_tags.reserve(v_old.size());
  for (std::size_t i = 0; i < v_old.size(); ++i) {
    auto& adj = old_adj[i];
    if (adj.empty()) {
      tags.old_tags.push_back(SentenceTag::removed());
      continue;
    }
    std::sort(adj.begin(), adj.end());
    tags.old_tags.push_back(SentenceTag::matched_to(
        adj, classify_group(v_old.at(i + 1), v_new, adj)));
  }
  tags.new_tags.reserve(v_new.size());
  for (std::size_t j = 0; j < v_new.size(); ++j) {
    auto& adj = new_adj[j];
    if (adj.empty()) {
      tags.new_tags.push_back(SentenceTag::added());
      continue;
    }
    std::sort(adj.begin(), adj.end());
    tags.new_tags.push_back(SentenceTag::matched_to(
        adj, classify_group(v_new.at(j + 1), v_old, adj)));
  }
  return tags;
}

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::kInsert:
      return "insert";
    case EditKind::kDelete:
      return "delete";
    case EditKind::kReplace:
      return "replace";
  }
  return "replace";
}

std::vector<AtomicEdit> word_diff(const TokenSeq& s_old, const TokenSeq& s_new) {
  const auto& a = s_old.tokens;
  const auto& b = s_new.tokens;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // lcs[i][j] = LCS length of a[i:] and b[j:].
  std::vector<std::vector<std::uint32_t>> lcs(n + 1,
                                               std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  std::vector<AtomicEdit> edits;
  std::size_t i = 0, j = 0;
  std::size_t gap_i = 0, gap_j = 0;
  auto flush = [&] {
    if (gap_i == i && gap_j == j) return;
    EditKind kind = EditKind::kReplace;
    if (gap_i == i) kind = EditKind::kInsert;
    if (gap_j == j) kind = EditKind::kDelete;
    edits.push_back({kind, gap_i, i, gap_j, j});
  };
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
      flush();
      ++i;
      ++j;
      gap_i = i;
      gap_j = j;
    } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
      ++i;
    } else {
      ++j;
    }
  }
  flush();
  return edits;
}

std::vector<std::string> apply_word_edits(
    const std::vector<std::string>& old_tokens,
    const std::vector<std::string>& new_tokens,
    std::span<const AtomicEdit> edits) {
  std::vector<std::string> out;
  std::size_t cursor = 0;
  for (const auto& e : edits) {
    if (e.old_begin < cursor || e.old_end > old_tokens.size() ||
        e.new_end > new_tokens.size() || e.old_begin > e.old_end ||
        e.new_begin > e.new_end) {
      throw InvalidArgument("word edits out of order or out of range");
    }
    out.insert(out.end(), old_tokens.begin() + static_cast<std::ptrdiff_t>(cursor),
               old_tokens.begin() + static_cast<std::ptrdiff_t>(e.old_begin));
    out.insert(out.end(), new_tokens.begin() + static_cast<std::ptrdiff_t>(e.new_begin),
               new_tokens.begin() + static_cast<std::ptrdiff_t>(e.new_end));
    cursor = e.old_end;
  }
  out.insert(out.end(), old_tokens.begin() + static_cast<std::ptrdiff_t>(cursor),
             old_tokens.end());
  return out;
}

MatchScores match_f1(const std::set<EdgeKey>& predicted,
                     const std::set<EdgeKey>& gold) {
  if (predicted.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  std::size_t tp = 0;
  for (const auto& e : predicted) tp += gold.contains(e) ? 1 : 0;
  MatchScores s;
  s.precision = predicted.empty() ? 0.0
                                  : static_cast<double>(tp) / static_cast<double>(predicted.size());
  s.recall = gold.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold.size());
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

std::vector<AnnotatedPair> load_annotated_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file " + path.string());
  std::vector<AnnotatedPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      AnnotatedPair p;
      p.article_id = j.at("article_id").get<std::string>();
      p.old_sentences = j.at("old").get<std::vector<std::string>>();
      p.new_sentences = j.at("new").get<std::vector<std::string>>();
      for (const auto& edge : j.at("gold")) {
        const auto i = edge.at(0).get<std::size_t>();
        const auto k = edge.at(1).get<std::size_t>();
        if (i == 0 || i > p.old_sentences.size() || k == 0 ||
            k > p.new_sentences.size()) {
          throw ParseError("gold edge out of range", line_no);
        }
        p.gold.emplace_back(i, k);
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k / 20.0);
  return grid;
}

std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

struct ScoredPair {
  std::size_t index;
  ScoreMatrix forward;
  ScoreMatrix backward;
};

std::set<EdgeKey> predict_edges(const std::vector<ScoredPair>& pairs, double t) {
  std::set<EdgeKey> out;
  const MatchThreshold threshold(t);
  for (const auto& p : pairs) {
    const MatchGraph g = build_match_graph(match_directional(p.forward, threshold),
                                           match_directional(p.backward, threshold));
    for (const auto& e : g.edges()) out.insert({p.index, e.old_idx, e.new_idx});
  }
  return out;
}

}  // namespace

CalibrationResult calibrate_threshold(std::span<const AnnotatedPair> fixtures,
                                      const SentenceScorer& sim,
                                      std::span<const double> grid,
                                      const Lemmatizer& lemmatizer) {
  if (fixtures.empty()) throw InvalidArgument("calibration needs fixtures");
  if (grid.empty()) throw InvalidArgument("calibration needs a threshold grid");

  std::vector<std::size_t> order(fixtures.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ha = stable_hash(fixtures[a].article_id);
    const auto hb = stable_hash(fixtures[b].article_id);
    if (ha != hb) return ha < hb;
    if (fixtures[a].article_id != fixtures[b].article_id) {
      return fixtures[a].article_id < fixtures[b].article_id;
    }
    return a < b;
  });
  const std::size_t tuning_count = (order.size() + 1) / 2;

  std::vector<ScoredPair> tuning, heldout;
  std::set<EdgeKey> tuning_gold, heldout_gold;
  CalibrationResult result;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t idx = order[rank];
    const auto& fx = fixtures[idx];
    const auto old_doc =
        PreparedDocument::from_sentences(SentenceList(fx.old_sentences), lemmatizer);
    const auto new_doc =
        PreparedDocument::from_sentences(SentenceList(fx.new_sentences), lemmatizer);
    ScoredPair sp{idx, directional_scores(old_doc, new_doc, sim),
                  directional_scores(new_doc, old_doc, sim)};
    const bool is_tuning = rank < tuning_count;
    auto& gold = is_tuning ? tuning_gold : heldout_gold;
    for (const auto& [i, j] : fx.gold) gold.insert({idx, i, j});
    (is_tuning ? tuning : heldout).push_back(std::move(sp));
    (is_tuning ? result.tuning_ids : result.heldout_ids).push_back(fx.article_id);
  }
  if (tuning_gold.empty()) {
    throw InvalidArgument("tuning half of the fixtures has no gold edges");
  }

  std::vector<double> sorted_grid(grid.begin(), grid.end());
  std::sort(sorted_grid.begin(), sorted_grid.end());
  double best_f1 = -1.0;
  for (double t : sorted_grid) {
    const double f1 = match_f1(predict_edges(tuning, t), tuning_gold).f1;
    result.curve.emplace_back(t, f1);
    if (f1 > best_f1) {
      best_f1 = f1;
      result.threshold = t;
    }
  }
  result.tuning_f1 = best_f1;
  result.heldout = match_f1(predict_edges(heldout, result.threshold), heldout_gold);
  return result;
}

}  // namespace revdiff
