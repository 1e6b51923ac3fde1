#ifndef REVDIFF_SIMILARITY_H_
#define REVDIFF_SIMILARITY_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "revdiff/segmenter.h"

namespace revdiff {

// Token key -> unit-length vector. Every vector shares one dimension.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // L2-normalizes `vector` before storing. Throws InvalidArgument on a
  // dimension mismatch or a zero vector.
  void insert(std::string key, std::vector<float> vector);

  // nullptr for out-of-vocabulary keys.
  const std::vector<float>* find(std::string_view key) const;

  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  std::size_t dimension() const { return dimension_; }

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<float>> vectors_;
};

// Text vectors, one "token v1 ... vd" per line. A leading word2vec-style
// "<count> <dim>" header line is accepted. Errors carry the line number.
EmbeddingTable parse_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// 1 when the keys are equal.
double phi_lexical(std::string_view key_x, std::string_view key_y);

// Dot product of two unit vectors, clamped to [0, 1].
double phi_embedding(std::span<const float> x, std::span<const float> y);

// Word similarity used inside the sentence scores.
class WordSim {
 public:
  enum class Kind { kLexical, kEmbedding };

  static WordSim lexical() { return WordSim(nullptr); }
  static WordSim embedding(std::shared_ptr<const EmbeddingTable> table);

  Kind kind() const { return table_ ? Kind::kEmbedding : Kind::kLexical; }
  const EmbeddingTable* table() const { return table_.get(); }

  // Keys missing from the embedding table score 0 against everything.
  double operator()(std::string_view key_x, std::string_view key_y) const;

 private:
  explicit WordSim(std::shared_ptr<const EmbeddingTable> table)
      : table_(std::move(table)) {}

  std::shared_ptr<const EmbeddingTable> table_;
};

// (1/|x|) * sum_i max_j phi(x_i, y_j). Throws InvalidArgument for empty x;
// returns 0 for empty y.
double sim_asym_max(const TokenSeq& x, const TokenSeq& y, const WordSim& phi);

// Fraction of x's n-grams that find an unused exact match among y's n-grams.
// x's n-grams claim matches left to right and each y n-gram is used once.
// Throws InvalidArgument when x has fewer than n keys.
double sim_asym_ngram(const TokenSeq& x, const TokenSeq& y, std::size_t n);

// (1/|x|) * value of the best one-to-one word assignment under phi.
double sim_hungarian(const TokenSeq& x, const TokenSeq& y, const WordSim& phi);

// Sentence BLEU of hypothesis x against the single reference y. weights[k]
// applies to (k+1)-gram precision; orders >= 2 use add-one smoothing.
// Empty x scores 0.
double sim_bleu(const TokenSeq& x, const TokenSeq& y,
                std::span<const double> weights);

// BLEU weights for a list of orders, e.g. {1, 2} -> {0.5, 0.5}.
std::vector<double> bleu_weights_for_orders(std::span<const int> orders);

// A configured sentence-similarity method, as selected with --sim.
class SentenceSimilarity {
 public:
  enum class Method {
    kMaxUnigram,
    kMaxNgram,
    kMaxEmbedding,
    kHungarian,
    kHungarianEmbedding,
    kBleu,
  };

  SentenceSimilarity() = default;

  static SentenceSimilarity max_unigram();
  static SentenceSimilarity max_ngram(std::size_t n);
  static SentenceSimilarity max_embedding(
      std::shared_ptr<const EmbeddingTable> table, std::string source = {});
  static SentenceSimilarity hungarian();
  static SentenceSimilarity hungarian_embedding(
      std::shared_ptr<const EmbeddingTable> table, std::string source = {});
  static SentenceSimilarity bleu(std::vector<int> orders);

  // unigram | ngram:N | embed:PATH | hungarian | hungarian:PATH | bleu:1,2,..
  static SentenceSimilarity parse(std::string_view spec);

  Method method() const { return method_; }

  // Canonical spec string; parse(describe()) selects the same method.
  std::string describe() const;

  // Threshold used when none is given on the command line.
  double default_threshold() const;

  // Directional score of x against y. Keys are expected to be lemmatized
  // already. An empty x scores 1 against an empty y and 0 otherwise. With
  // n-gram methods an x shorter than n is scored at order |x|.
  double operator()(const TokenSeq& x, const TokenSeq& y) const;

 private:
  Method method_ = Method::kMaxUnigram;
  std::size_t n_ = 1;
  std::vector<int> orders_;
  std::vector<double> weights_;
  std::shared_ptr<const EmbeddingTable> table_;
  std::string source_;
};

}  // namespace revdiff

#endif  // REVDIFF_SIMILARITY_H_
