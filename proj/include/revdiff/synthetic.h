#ifndef REVDIFF_SYNTHETIC_H_
#define REVDIFF_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revdiff/rng.h"
#include "revdiff/store.h"

namespace revdiff {

struct TextOptions {
  std::size_t vocabulary = 4000;
  double zipf_exponent = 1.05;
  // Share of tokens drawn from a small closed class of function words.
  double function_word_rate = 0.3;
  std::size_t min_words = 12;
  std::size_t max_words = 24;
};

// Seeded generator of English-looking sentences over a made-up vocabulary.
// Content words follow a Zipf law; all words are lowercase ASCII.
class TextGenerator {
 public:
  explicit TextGenerator(std::uint64_t seed, TextOptions options = {});

  std::string word();
  std::vector<std::string> words(std::size_t n);
  std::string sentence();
  std::vector<std::string> document(std::size_t n_sentences);

  SeededRng& rng() { return rng_; }
  const TextOptions& options() const { return options_; }

 private:
  TextOptions options_;
  SeededRng rng_;
  std::vector<std::string> lexicon_;
  std::vector<double> cdf_;
};

// Capitalized, space-joined, period-terminated.
std::string render_sentence(const std::vector<std::string>& words);
std::vector<std::string> sentence_words(const std::string& sentence);
std::string join_sentences(const std::vector<std::string>& sentences);

struct MutationOptions {
  double delete_rate = 0.1;  // per old sentence
  double edit_rate = 0.2;    // per surviving old sentence
  double add_rate = 0.1;     // expected additions per old sentence
  double move_rate = 0.05;   // per surviving old sentence
  double edit_min_fraction = 0.2;
  double edit_max_fraction = 0.4;
};

// A version pair with its ground truth. Indices are 1-based.
struct MutatedPair {
  std::vector<std::string> old_sentences;
  std::vector<std::string> new_sentences;
  // New position of each old sentence; empty when deleted.
  std::vector<std::optional<std::size_t>> old_to_new;
  std::vector<bool> edited;  // per old sentence
  std::vector<bool> added;   // per new sentence
  std::size_t moves = 0;
};

MutatedPair mutate(const std::vector<std::string>& old_sentences, TextGenerator& gen,
                   const MutationOptions& options = {});

// Replaces a fraction of the words, keeping at least one word changed.
std::string edit_sentence(const std::string& sentence, double fraction, TextGenerator& gen);

struct CorpusOptions {
  std::size_t articles = 50;
  std::size_t min_versions = 1;
  std::size_t max_versions = 6;
  std::size_t min_sentences = 5;
  std::size_t max_sentences = 15;
  MutationOptions mutation;
  std::vector<std::string> sources = {"nyt", "ap", "washpo", "bbc", "independent",
                                      "guardian", "reuters", "wire"};
};

// Articles with chains of mutated versions and increasing timestamps.
std::vector<ArticleVersion> synthetic_corpus(std::uint64_t seed, const CorpusOptions& options = {});

// Seconds since the epoch as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(std::int64_t epoch_seconds);

}  // namespace revdiff

#endif  // REVDIFF_SYNTHETIC_H_
