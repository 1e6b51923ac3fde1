#ifndef REVDIFF_STORE_H_
#define REVDIFF_STORE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

struct sqlite3;

namespace revdiff {

// One publication of an article URL (row of the `articles` table).
struct ArticleVersion {
  std::string source;
  std::string a_id;
  std::int64_t version_id = 0;
  std::string title;
  std::string url;
  std::string text;
  std::string created;
  std::optional<std::string> archive_url;

  bool operator==(const ArticleVersion&) const = default;
};

struct ArticleKey {
  std::string source;
  std::string a_id;

  auto operator<=>(const ArticleKey&) const = default;
};

// Two adjacent versions of one article.
struct PairKey {
  std::string source;
  std::string a_id;
  std::int64_t v_old_id = 0;
  std::int64_t v_new_id = 0;

  auto operator<=>(const PairKey&) const = default;
  ArticleKey article() const { return {source, a_id}; }
};

// Row of `sentence_diffs`. Empty strings stand for the missing side.
struct DiffRecord {
  PairKey pair;
  std::size_t sentence_id = 0;
  std::string sent_old;
  std::string sent_new;
  std::string tag_old;
  std::string tag_new;

  bool operator==(const DiffRecord&) const = default;
};

// Row of `word_diffs`: one atomic edit inside a matched, changed sentence pair.
struct WordDiffRecord {
  PairKey pair;
  std::size_t old_sentence_id = 0;
  std::size_t new_sentence_id = 0;
  std::size_t edit_id = 0;
  std::string kind;
  std::size_t old_start = 0;
  std::size_t old_end = 0;
  std::size_t new_start = 0;
  std::size_t new_end = 0;
  std::string old_text;
  std::string new_text;

  bool operator==(const WordDiffRecord&) const = default;
};

// Row of `refactors`.
struct RefactorRecord {
  PairKey pair;
  std::size_t old_idx = 0;
  std::size_t new_idx = 0;
  std::string direction;
  std::size_t removal_rank = 0;

  bool operator==(const RefactorRecord&) const = default;
};

// Row of the cached `sentence_stats` summary table.
struct PairSummary {
  PairKey pair;
  std::size_t num_sentences_old = 0;
  std::size_t num_sentences_new = 0;
  std::size_t num_sentences_added = 0;
  std::size_t num_sentences_removed = 0;
  std::size_t num_sentences_changed = 0;
  std::size_t num_sentences_unchanged = 0;
  std::size_t num_refactors = 0;
  std::size_t num_word_edits = 0;

  bool operator==(const PairSummary&) const = default;
};

// Everything diff_corpus stores for one version pair.
struct PairDiff {
  PairKey key;
  std::vector<DiffRecord> rows;
  std::vector<WordDiffRecord> word_diffs;
  std::vector<RefactorRecord> refactors;
  PairSummary summary;
};

// SQLite-backed store. Column names follow the released dataset layout.
// Not thread-safe: one Store per thread.
class Store {
 public:
  // Opens or creates the database file and its schema. ":memory:" works.
  static Store open(const std::filesystem::path& path);

  Store(Store&& other) noexcept;
  Store& operator=(Store&& other) noexcept;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;
  ~Store();

  // RAII transaction; rolls back unless commit() was called.
  class Transaction {
   public:
    explicit Transaction(Store& store);
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;
    ~Transaction();
    void commit();

   private:
    Store& store_;
    bool done_ = false;
  };

  // Returns true when a row with the same key already existed.
  bool upsert_article(const ArticleVersion& version);
  // Rewrites NUM_VERSIONS for every article.
  void refresh_version_counts();

  std::vector<ArticleKey> article_keys() const;
  // Ordered by version_id.
  std::vector<ArticleVersion> versions(const ArticleKey& key) const;
  std::optional<std::int64_t> num_versions(const ArticleKey& key) const;
  std::size_t article_row_count() const;

  std::optional<std::string> pair_digest(const PairKey& key) const;
  std::vector<PairKey> diffed_pairs() const;
  // Replaces every stored row of the pair.
  void replace_pair(const PairDiff& diff, const std::string& digest);
  void delete_pair(const PairKey& key);
  // Rebuilds `article_stats` from `sentence_stats`.
  void rebuild_article_stats();

  // All rows in key order.
  std::vector<DiffRecord> sentence_diffs() const;
  std::vector<DiffRecord> sentence_diffs(const PairKey& key) const;
  std::vector<WordDiffRecord> word_diffs() const;
  std::vector<RefactorRecord> refactors() const;
  std::vector<RefactorRecord> refactors(const PairKey& key) const;
  std::vector<PairSummary> pair_summaries() const;

  // One CSV per relation (header row + RFC 4180 quoting) into `dir`.
  std::vector<std::filesystem::path> export_csv(const std::filesystem::path& dir) const;

  static const std::vector<std::string>& table_names();

  // Runs a statement with no result rows.
  void exec(const std::string& sql);

 private:
  explicit Store(sqlite3* db) : db_(db) {}

  sqlite3* db_ = nullptr;
};

}  // namespace revdiff

#endif  // REVDIFF_STORE_H_
