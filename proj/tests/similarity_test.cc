#include "revdiff/similarity.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "revdiff/assignment.h"
#include "revdiff/error.h"
#include "test_util.h"

namespace revdiff {
namespace {

using testing::Concat;
using testing::Embed;
using testing::RandomTokens;

TokenSeq T(std::string_view s) { return tokenize(s); }

TEST(PhiLexical, ExactKeyEquality) {
  EXPECT_EQ(phi_lexical("cat", "cat"), 1.0);
  EXPECT_EQ(phi_lexical("cat", "cats"), 0.0);
}

TEST(PhiEmbedding, ClampsNegativeCosine) {
  const std::vector<float> a = {1.0f, 0.0f};
  const std::vector<float> b = {-1.0f, 0.0f};
  const std::vector<float> c = {0.6f, 0.8f};
  EXPECT_EQ(phi_embedding(a, b), 0.0);
  EXPECT_NEAR(phi_embedding(a, c), 0.6, 1e-7);
  const std::vector<float> d = {1.0f};
  EXPECT_THROW(phi_embedding(a, d), InvalidArgument);
}

TEST(EmbeddingTable, NormalizesAndValidates) {
  EmbeddingTable t;
  t.insert("x", {3.0f, 4.0f});
  ASSERT_NE(t.find("x"), nullptr);
  EXPECT_NEAR((*t.find("x"))[0], 0.6f, 1e-7);
  EXPECT_EQ(t.find("y"), nullptr);
  EXPECT_THROW(t.insert("z", {1.0f}), InvalidArgument);
  EXPECT_THROW(t.insert("z", {0.0f, 0.0f}), InvalidArgument);
}

TEST(ParseEmbeddings, HeaderAndErrors) {
  std::istringstream ok("2 2\ncat 1 0\ndog 0 1\n");
  EXPECT_EQ(parse_embeddings(ok).size(), 2u);
  std::istringstream bad("cat 1 0\ndog 0\n");
  try {
    parse_embeddings(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(SimAsymMax, HandComputed) {
  EXPECT_DOUBLE_EQ(sim_asym_max(T("a b c"), T("a c d"), WordSim::lexical()), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(sim_asym_max(T("a a"), T("a"), WordSim::lexical()), 1.0);
  EXPECT_DOUBLE_EQ(sim_asym_max(T("a"), T(""), WordSim::lexical()), 0.0);
  EXPECT_THROW(sim_asym_max(T(""), T("a"), WordSim::lexical()), InvalidArgument);
}

TEST(SimAsymMax, IsAsymmetric) {
  const TokenSeq short_s = T("the storm hit");
  const TokenSeq long_s = T("the storm hit the coast of texas on monday");
  EXPECT_DOUBLE_EQ(sim_asym_max(short_s, long_s, WordSim::lexical()), 1.0);
  EXPECT_LT(sim_asym_max(long_s, short_s, WordSim::lexical()), 1.0);
}

TEST(SimAsymMax, EmbeddingOutOfVocabularyScoresZero) {
  auto table = std::make_shared<EmbeddingTable>();
  table->insert("big", {1.0f, 0.0f});
  table->insert("large", {0.8f, 0.6f});
  const WordSim phi = WordSim::embedding(table);
  EXPECT_NEAR(sim_asym_max(T("big zzz"), T("large"), phi), 0.4, 1e-6);
}

TEST(SimAsymNgram, GreedyNonOverlapping) {
  // x bigrams: "a b", "b a", "a b"; y has one "a b" to claim.
  EXPECT_DOUBLE_EQ(sim_asym_ngram(T("a b a b"), T("a b"), 2), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(sim_asym_ngram(T("a b c"), T("x a b c y"), 2), 1.0);
  EXPECT_THROW(sim_asym_ngram(T("a"), T("a b"), 2), InvalidArgument);
}

TEST(SimHungarian, OneToOneLimitsRepeats) {
  EXPECT_DOUBLE_EQ(sim_hungarian(T("a a"), T("a"), WordSim::lexical()), 0.5);
  EXPECT_DOUBLE_EQ(sim_hungarian(T("a b"), T("b a"), WordSim::lexical()), 1.0);
}

TEST(SimBleu, HandComputed) {
  const std::vector<double> w12 = {0.5, 0.5};
  // p1 = 1, p2 = (2+1)/(2+1), brevity exp(1 - 6/3).
  EXPECT_NEAR(sim_bleu(T("the cat sat"), T("the cat sat on the mat"), w12), std::exp(-1.0),
              1e-12);
  // p1 = 3/4, p2 = (1+1)/(3+1), equal lengths.
  EXPECT_NEAR(sim_bleu(T("a b c d"), T("a b x d"), w12), std::sqrt(0.75 * 0.5), 1e-12);
  EXPECT_EQ(sim_bleu(T(""), T("a"), w12), 0.0);
  EXPECT_EQ(sim_bleu(T("q"), T("a"), w12), 0.0);
}

TEST(BleuWeights, UniformOverOrders) {
  const std::vector<int> orders = {1, 3};
  EXPECT_EQ(bleu_weights_for_orders(orders), (std::vector<double>{0.5, 0.0, 0.5}));
  const std::vector<int> bad = {0};
  EXPECT_THROW(bleu_weights_for_orders(bad), InvalidArgument);
}

TEST(SentenceSimilarity, ParseAndDescribeRoundTrip) {
  for (const char* spec : {"unigram", "ngram:2", "hungarian", "bleu:1,2"}) {
    const SentenceSimilarity s = SentenceSimilarity::parse(spec);
    EXPECT_EQ(s.describe(), spec);
    EXPECT_EQ(SentenceSimilarity::parse(s.describe()).method(), s.method());
  }
  EXPECT_THROW(SentenceSimilarity::parse("ngram:0"), InvalidArgument);
  EXPECT_THROW(SentenceSimilarity::parse("cosine"), InvalidArgument);
  EXPECT_THROW(SentenceSimilarity::parse("embed"), InvalidArgument);
}

TEST(SentenceSimilarity, EmptyAndShortInputs) {
  const auto ngram3 = SentenceSimilarity::max_ngram(3);
  EXPECT_EQ(ngram3(T(""), T("")), 1.0);
  EXPECT_EQ(ngram3(T(""), T("a")), 0.0);
  // Shorter than the order: scored at order |x|.
  EXPECT_EQ(ngram3(T("a b"), T("x a b")), 1.0);
}

// Exhaustive maximum over all injective maps of the smaller side.
double BruteForceAssignment(const WeightMatrix& w) {
  const bool transpose = w.rows() > w.cols();
  const std::size_t r = transpose ? w.cols() : w.rows();
  const std::size_t c = transpose ? w.rows() : w.cols();
  auto at = [&](std::size_t i, std::size_t j) { return transpose ? w(j, i) : w(i, j); };
  std::vector<std::size_t> cols(c);
  std::iota(cols.begin(), cols.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < r; ++i) total += at(i, cols[i]);
    best = std::max(best, total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

TEST(MaxWeightAssignment, MatchesBruteForce) {
  SeededRng rng(21);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::size_t rows = rng.between(1, 6);
    const std::size_t cols = rng.between(1, 6);
    WeightMatrix w(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        // Mix of ties and arbitrary values.
        w(i, j) = rng.chance(0.5) ? static_cast<double>(rng.below(3)) : rng.uniform();
      }
    }
    const Assignment a = max_weight_assignment(w);
    ASSERT_NEAR(a.total, BruteForceAssignment(w), 1e-9);

    // The reported assignment is one-to-one and sums to the total.
    std::vector<bool> used(cols, false);
    double sum = 0.0;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (!a.row_to_col[i]) continue;
      ASSERT_FALSE(used[*a.row_to_col[i]]);
      used[*a.row_to_col[i]] = true;
      sum += w(i, *a.row_to_col[i]);
      ++assigned;
    }
    ASSERT_EQ(assigned, std::min(rows, cols));
    ASSERT_NEAR(sum, a.total, 1e-9);
  }
}

TEST(MaxWeightAssignment, RejectsNegativeWeights) {
  WeightMatrix w(1, 1, -1.0);
  EXPECT_THROW(max_weight_assignment(w), InvalidArgument);
}

TEST(SimilarityProperty, Axioms) {
  SeededRng rng(22);
  const WordSim lex = WordSim::lexical();
  for (int iter = 0; iter < 2000; ++iter) {
    const TokenSeq x = RandomTokens(rng, 1, 12, 15);
    const TokenSeq y = RandomTokens(rng, 0, 12, 15);
    const TokenSeq z = RandomTokens(rng, 1, 6, 15);
    const double m = sim_asym_max(x, y, lex);
    const double h = sim_hungarian(x, y, lex);
    ASSERT_GE(m, 0.0);
    ASSERT_LE(m, 1.0);
    ASSERT_GE(h, 0.0);
    ASSERT_LE(h, m + 1e-12);
    ASSERT_EQ(sim_asym_max(x, x, lex), 1.0);
    ASSERT_EQ(sim_hungarian(x, x, lex), 1.0);
    ASSERT_EQ(sim_asym_max(x, Embed(rng, x, y), lex), 1.0);
    ASSERT_GE(sim_asym_max(x, Concat(y, z), lex), m);
    ASSERT_GE(sim_hungarian(x, Concat(y, z), lex), h - 1e-12);
    if (x.size() >= 2) {
      const double g = sim_asym_ngram(x, y, 2);
      ASSERT_GE(g, 0.0);
      ASSERT_LE(g, 1.0);
      ASSERT_GE(sim_asym_ngram(x, Concat(y, z), 2), g);
      ASSERT_EQ(sim_asym_ngram(x, Concat(z, Concat(x, y)), 2), 1.0);
    }
  }
}

}  // namespace
}  // namespace revdiff
