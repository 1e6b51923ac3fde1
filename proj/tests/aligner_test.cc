#include "revdiff/aligner.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "revdiff/error.h"
#include "revdiff/similarity.h"
#include "revdiff/synthetic.h"
#include "test_util.h"

namespace revdiff {
namespace {

using testing::RandomTokens;

const SentenceScorer kUnigram = SentenceSimilarity::max_unigram();

PreparedDocument Doc(std::vector<std::string> sentences) {
  return PreparedDocument::from_sentences(SentenceList(std::move(sentences)));
}

TagLists Tags(const PreparedDocument& a, const PreparedDocument& b, double t = 0.5) {
  const MatchThreshold mt(t);
  const MatchGraph g =
      build_match_graph(match_directional(a, b, kUnigram, mt), match_directional(b, a, kUnigram, mt));
  return derive_tags(a.sentences, b.sentences, g);
}

std::vector<std::string> Serialized(const std::vector<SentenceTag>& tags) {
  std::vector<std::string> out;
  for (const auto& t : tags) out.push_back(t.serialize());
  return out;
}

TEST(MatchThreshold, RejectsOutOfRange) {
  EXPECT_THROW(MatchThreshold(-0.1), InvalidArgument);
  EXPECT_THROW(MatchThreshold(1.1), InvalidArgument);
  EXPECT_NO_THROW(MatchThreshold(0.0));
  EXPECT_NO_THROW(MatchThreshold(1.0));
}

TEST(MatchDirectional, StrictThresholdAndNearestTies) {
  const ScoreMatrix scores = {{0.5, 0.4}, {0.7, 0.7}, {0.9, 0.0, 0.9, 0.9}};
  const DirectionalMap m = match_directional(scores, MatchThreshold(0.5));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.target(1), std::nullopt);  // 0.5 is not above 0.5
  EXPECT_EQ(m.target(2), 2u);  // equal scores: nearest position wins
  EXPECT_EQ(m.target(3), 3u);
  EXPECT_DOUBLE_EQ(m.best_score(2), 0.7);
}

TEST(BuildMatchGraph, UnionWithProvenanceAndMaxScore) {
  const DirectionalMap fwd({2, std::nullopt}, {0.8, 0.1});
  const DirectionalMap bwd({std::nullopt, 1, 2}, {0.0, 0.6, 0.9});
  const MatchGraph g = build_match_graph(fwd, bwd);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.edges()[0], (MatchEdge{1, 2, 0.8, Provenance::kBoth}));
  EXPECT_EQ(g.edges()[1], (MatchEdge{2, 3, 0.9, Provenance::kBackward}));
  EXPECT_EQ(g.new_neighbors(1), (std::vector<std::size_t>{2}));
  EXPECT_EQ(g.old_neighbors(3), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(g.old_neighbors(1).empty());
}

TEST(SentenceTag, SerializeParseRoundTrip) {
  for (const char* s : {"A", "R", "M 1 U", "M 2 3 C"}) {
    EXPECT_EQ(SentenceTag::parse(s).serialize(), s);
  }
  const SentenceTag bare = SentenceTag::parse("M 1");
  EXPECT_EQ(bare.change, std::nullopt);
  EXPECT_TRUE(SentenceTag::parse("M 1 C").matches(bare));
  EXPECT_FALSE(bare.matches(SentenceTag::parse("M 1 C")));
  EXPECT_FALSE(SentenceTag::parse("M 2 C").matches(bare));
}

TEST(SentenceTag, ParseErrors) {
  for (const char* s : {"", "X", "M", "M C", "M 0 C", "M 1 C U", "A 1", "M x U", "M 1 Q"}) {
    EXPECT_THROW(SentenceTag::parse(s), ParseError) << s;
  }
}

TEST(ClassifyChange, NormalizedEquality) {
  EXPECT_EQ(classify_change("A  b.", "A b."), Change::kUnchanged);
  EXPECT_EQ(classify_change("A b.", "A c."), Change::kChanged);
}

TEST(DeriveTags, AdditionDeletionAndEdit) {
  const auto old_doc = Doc({"The storm hit Texas on Monday.", "Power was lost in Houston.",
                            "Officials urged calm."});
  const auto new_doc = Doc({"The storm hit Texas early on Monday.", "Officials urged calm.",
                            "Schools will stay closed."});
  const TagLists t = Tags(old_doc, new_doc);
  EXPECT_EQ(Serialized(t.old_tags), (std::vector<std::string>{"M 1 C", "R", "M 2 U"}));
  EXPECT_EQ(Serialized(t.new_tags), (std::vector<std::string>{"M 1 C", "M 3 U", "A"}));
}

TEST(DeriveTags, SplitProducesMultiIndexTag) {
  const auto old_doc = Doc({"Rescue teams reached the village and found three survivors."});
  const auto new_doc =
      Doc({"Rescue teams reached the village.", "They found three survivors."});
  const TagLists t = Tags(old_doc, new_doc);
  EXPECT_EQ(Serialized(t.old_tags), (std::vector<std::string>{"M 1 2 C"}));
  EXPECT_EQ(Serialized(t.new_tags), (std::vector<std::string>{"M 1 C", "M 1 C"}));
}

TEST(DeriveTags, SelfDiffIsAllUnchanged) {
  const auto doc = Doc({"One two three.", "Four five six.", "One two three."});
  const TagLists t = Tags(doc, doc);
  // Repeated sentences still map to themselves.
  EXPECT_EQ(Serialized(t.old_tags), (std::vector<std::string>{"M 1 U", "M 2 U", "M 3 U"}));
}

// LCS length by the textbook prefix DP.
std::size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
    }
  }
  return dp[a.size()][b.size()];
}

TEST(WordDiff, ReplaceInsertDelete) {
  const TokenSeq a = tokenize("the cat sat on the mat");
  const TokenSeq b = tokenize("the dog sat on the mat today");
  const auto edits = word_diff(a, b);
  ASSERT_EQ(edits.size(), 2u);
  EXPECT_EQ(edits[0], (AtomicEdit{EditKind::kReplace, 1, 2, 1, 2}));
  EXPECT_EQ(edits[1], (AtomicEdit{EditKind::kInsert, 6, 6, 6, 7}));
  EXPECT_EQ(to_string(EditKind::kDelete), "delete");
  EXPECT_TRUE(word_diff(a, a).empty());
}

TEST(WordDiffProperty, MinimalAndReconstructs) {
  SeededRng rng(31);
  for (int iter = 0; iter < 3000; ++iter) {
    const TokenSeq a = RandomTokens(rng, 0, 14, 6);
    const TokenSeq b = RandomTokens(rng, 0, 14, 6);
    const auto edits = word_diff(a, b);
    ASSERT_EQ(apply_word_edits(a.tokens, b.tokens, edits), b.tokens);
    std::size_t removed = 0;
    std::size_t prev_end = 0;
    for (const auto& e : edits) {
      ASSERT_LE(prev_end, e.old_begin);
      ASSERT_LE(e.old_begin, e.old_end);
      ASSERT_LE(e.new_begin, e.new_end);
      ASSERT_FALSE(e.old_begin == e.old_end && e.new_begin == e.new_end);
      removed += e.old_end - e.old_begin;
      prev_end = e.old_end;
    }
    ASSERT_EQ(a.size() - removed, LcsLength(a.tokens, b.tokens));
  }
}

TEST(MatchF1, HandComputed) {
  const std::set<EdgeKey> gold = {{0, 1, 1}, {0, 2, 2}, {1, 1, 1}, {1, 2, 3}};
  const std::set<EdgeKey> pred = {{0, 1, 1}, {0, 2, 2}, {1, 1, 2}};
  const MatchScores s = match_f1(pred, gold);
  EXPECT_DOUBLE_EQ(s.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 2 * (2.0 / 3.0) * 0.5 / (2.0 / 3.0 + 0.5));
  EXPECT_DOUBLE_EQ(match_f1({}, {}).f1, 1.0);
  EXPECT_DOUBLE_EQ(match_f1({}, gold).f1, 0.0);
}

TEST(StableHash, Fnv1aReferenceValues) {
  EXPECT_EQ(stable_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(stable_hash("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(stable_hash("foobar"), 0x85944171f73967e8ULL);
}

TEST(DefaultGrid, TwentyOnePoints) {
  const auto grid = default_threshold_grid();
  ASSERT_EQ(grid.size(), 21u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_DOUBLE_EQ(grid[10], 0.5);
}

TEST(LoadAnnotatedPairs, ReportsLine) {
  const auto path = std::filesystem::temp_directory_path() / "revdiff_annot_bad.jsonl";
  {
    std::ofstream out(path);
    out << R"({"article_id":"a","old":["X."],"new":["X."],"gold":[[1,1]]})" << "\n";
    out << R"({"article_id":"b","old":["X."],"new":["X."],"gold":[[1,5]]})" << "\n";
  }
  try {
    load_annotated_pairs(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::filesystem::remove(path);
}

TEST(CalibrateThreshold, DeterministicAndTieToSmallest) {
  std::vector<AnnotatedPair> pairs;
  for (int i = 0; i < 6; ++i) {
    AnnotatedPair p;
    p.article_id = "doc" + std::to_string(i);
    p.old_sentences = {"Alpha beta gamma delta.", "Red green blue."};
    p.new_sentences = {"Alpha beta gamma epsilon.", "Cyan magenta yellow."};
    p.gold = {{1, 1}};
    pairs.push_back(p);
  }
  const auto grid = default_threshold_grid();
  const CalibrationResult a = calibrate_threshold(pairs, kUnigram, grid);
  const CalibrationResult b = calibrate_threshold(pairs, kUnigram, grid);
  // Gold pair scores 0.75, the others 0: every T in [0, 0.70] is perfect.
  EXPECT_EQ(a.threshold, 0.0);
  EXPECT_EQ(a.tuning_f1, 1.0);
  EXPECT_EQ(a.heldout.f1, 1.0);
  EXPECT_EQ(a.tuning_ids, b.tuning_ids);
  EXPECT_EQ(a.tuning_ids.size(), 3u);
  EXPECT_EQ(a.heldout_ids.size(), 3u);
  EXPECT_EQ(a.curve.size(), grid.size());
}

// Checks tag partition and mutual consistency against the graph.
void CheckTagInvariants(const TagLists& t, const MatchGraph& g, std::size_t n_old,
                        std::size_t n_new) {
  ASSERT_EQ(t.old_tags.size(), n_old);
  ASSERT_EQ(t.new_tags.size(), n_new);
  for (std::size_t i = 1; i <= n_old; ++i) {
    const SentenceTag& tag = t.old_tags[i - 1];
    ASSERT_NE(tag.op, TagOp::kAdded);
    ASSERT_EQ(tag.op == TagOp::kMatched, !g.new_neighbors(i).empty());
    if (tag.op == TagOp::kMatched) {
      ASSERT_EQ(tag.matched, g.new_neighbors(i));
      ASSERT_TRUE(tag.change.has_value());
      for (std::size_t j : tag.matched) {
        const auto& back = t.new_tags[j - 1].matched;
        ASSERT_TRUE(std::find(back.begin(), back.end(), i) != back.end());
      }
    }
  }
  for (std::size_t j = 1; j <= n_new; ++j) {
    const SentenceTag& tag = t.new_tags[j - 1];
    ASSERT_NE(tag.op, TagOp::kRemoved);
    ASSERT_EQ(tag.op == TagOp::kMatched, !g.old_neighbors(j).empty());
    if (tag.op == TagOp::kMatched) ASSERT_EQ(tag.matched, g.old_neighbors(j));
  }
}

TEST(DeriveTagsProperty, PartitionAndConsistency) {
  TextGenerator gen(32, TextOptions{.vocabulary = 300});
  for (int iter = 0; iter < 300; ++iter) {
    const auto old_s = gen.document(gen.rng().between(0, 10));
    const MutatedPair m = mutate(old_s, gen, {.delete_rate = 0.2, .edit_rate = 0.3,
                                              .add_rate = 0.2, .move_rate = 0.2});
    const auto a = Doc(m.old_sentences);
    const auto b = Doc(m.new_sentences);
    const MatchThreshold t(0.5);
    const MatchGraph g =
        build_match_graph(match_directional(a, b, kUnigram, t), match_directional(b, a, kUnigram, t));
    const TagLists tags = derive_tags(a.sentences, b.sentences, g);
    CheckTagInvariants(tags, g, a.size(), b.size());

    const TagLists self = Tags(a, a);
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(self.old_tags[i].op, TagOp::kMatched);
      ASSERT_EQ(self.old_tags[i].change, Change::kUnchanged);
    }
  }
}

}  // namespace
}  // namespace revdiff
