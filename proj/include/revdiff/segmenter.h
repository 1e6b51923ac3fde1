#ifndef REVDIFF_SEGMENTER_H_
#define REVDIFF_SEGMENTER_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revdiff {

// Ordered sentences of one document version. Public indices are 1-based to
// match the sentence ids stored in the diff tables.
class SentenceList {
 public:
  SentenceList() = default;
  explicit SentenceList(std::vector<std::string> sentences);

  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }

  // 1-based access; throws InvalidArgument when out of range.
  const std::string& at(std::size_t index) const;

  const std::vector<std::string>& sentences() const { return sentences_; }

  bool operator==(const SentenceList&) const = default;

 private:
  std::vector<std::string> sentences_;
};

// Tokens as they appear in the sentence plus their normalized match keys.
// Both vectors always have the same length and no key is empty.
struct TokenSeq {
  std::vector<std::string> tokens;
  std::vector<std::string> keys;

  std::size_t size() const { return keys.size(); }
  bool empty() const { return keys.empty(); }

  bool operator==(const TokenSeq&) const = default;
};

// NFC normalization, CR/CRLF -> LF, whitespace runs collapsed to one space
// inside each line, control characters removed.
std::string normalize_text(std::string_view raw);

// Rule-based splitter: a sentence ends at [.!?] (plus any closing quotes or
// brackets) when followed by whitespace and then an uppercase letter or an
// opening quote. A fixed abbreviation list suppresses the break. Line breaks
// are treated as ordinary whitespace.
SentenceList split_sentences(std::string_view text);

// The abbreviations that never end a sentence.
const std::vector<std::string>& sentence_abbreviations();

// Whitespace tokenization. Boundary punctuation stays in the token but is
// dropped from the key; tokens that are punctuation only are skipped.
TokenSeq tokenize(std::string_view sentence);

// Lowercase + boundary punctuation stripped, no possessive handling.
std::string token_key(std::string_view token);

// token_key plus removal of a trailing possessive "'s".
std::string lemma_key(std::string_view token);

// Space-joined windows of n consecutive keys.
std::vector<std::string> ngrams(const TokenSeq& seq, std::size_t n);
std::vector<std::string> ngrams(const std::vector<std::string>& keys,
                                std::size_t n);

// Maps tokens to lemmas. Without a table this is lemma_key(); with one, keys
// present in the table use the table's lemma.
class Lemmatizer {
 public:
  Lemmatizer() = default;

  // Reads "token<TAB>lemma" lines. Tokens are looked up by token_key().
  static Lemmatizer from_file(const std::filesystem::path& path);
  static Lemmatizer from_table(
      std::unordered_map<std::string, std::string> table);

  std::string lemma(std::string_view token) const;
  std::size_t table_size() const { return table_.size(); }

  // Rewrites every key of seq to its lemma.
  TokenSeq apply(const TokenSeq& seq) const;

 private:
  std::unordered_map<std::string, std::string> table_;
};

}  // namespace revdiff

#endif  // REVDIFF_SEGMENTER_H_
