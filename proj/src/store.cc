#include "revdiff/store.h"

#include <sqlite3.h>

#include <fstream>
#include <map>
#include <utility>

#include "revdiff/error.h"

namespace revdiff {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS articles (
  SOURCE TEXT NOT NULL,
  A_ID TEXT NOT NULL,
  VERSION_ID INTEGER NOT NULL,
  TITLE TEXT,
  URL TEXT,
  TEXT TEXT,
  CREATED TEXT,
  ARCHIVE_URL TEXT,
  NUM_VERSIONS INTEGER,
  PRIMARY KEY (SOURCE, A_ID, VERSION_ID)
);
CREATE TABLE IF NOT EXISTS sentence_diffs (
  SOURCE TEXT NOT NULL,
  A_ID TEXT NOT NULL,
  V_OLD_ID INTEGER NOT NULL,
  V_NEW_ID INTEGER NOT NULL,
  SENTENCE_ID INTEGER NOT NULL,
  SENT_OLD TEXT,
  SENT_NEW TEXT,
  TAG_OLD TEXT,
  TAG_NEW TEXT,
  PRIMARY KEY (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, SENTENCE_ID)
);
CREATE TABLE IF NOT EXISTS word_diffs (
  SOURCE TEXT NOT NULL,
  A_ID TEXT NOT NULL,
  V_OLD_ID INTEGER NOT NULL,
  V_NEW_ID INTEGER NOT NULL,
  OLD_SENTENCE_ID INTEGER NOT NULL,
  NEW_SENTENCE_ID INTEGER NOT NULL,
  EDIT_ID INTEGER NOT NULL,
  KIND TEXT NOT NULL,
  OLD_START INTEGER NOT NULL,
  OLD_END INTEGER NOT NULL,
  NEW_START INTEGER NOT NULL,
  NEW_END INTEGER NOT NULL,
  OLD_TEXT TEXT,
  NEW_TEXT TEXT,
  PRIMARY KEY (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, OLD_SENTENCE_ID,
               NEW_SENTENCE_ID, EDIT_ID)
);
CREATE TABLE IF NOT EXISTS refactors (
  SOURCE TEXT NOT NULL,
  A_ID TEXT NOT NULL,
  V_OLD_ID INTEGER NOT NULL,
  V_NEW_ID INTEGER NOT NULL,
  OLD_IDX INTEGER NOT NULL,
  NEW_IDX INTEGER NOT NULL,
  DIRECTION TEXT NOT NULL,
  REMOVAL_RANK INTEGER NOT NULL,
  PRIMARY KEY (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, REMOVAL_RANK)
);
CREATE TABLE IF NOT EXISTS sentence_stats (
  SOURCE TEXT NOT NULL,
  A_ID TEXT NOT NULL,
  V_OLD_ID INTEGER NOT NULL,
  V_NEW_ID INTEGER NOT NULL,
  NUM_SENTENCES_OLD INTEGER NOT NULL,
  NUM_SENTENCES_NEW INTEGER NOT NULL,
  NUM_SENTENCES_ADDED INTEGER NOT NULL,
  NUM_SENTENCES_REMOVED INTEGER NOT NULL,
  NUM_SENTENCES_CHANGED INTEGER NOT NULL,
  NUM_SENTENCES_UNCHANGED INTEGER NOT NULL,
  NUM_REFACTORS INTEGER NOT NULL,
  NUM_WORD_EDITS INTEGER NOT NULL,
  PRIMARY KEY (SOURCE, A_ID, V_OLD_ID, V_NEW_ID)
);
CREATE TABLE IF NOT EXISTS article_stats (
  SOURCE TEXT NOT NULL,
  A_ID TEXT NOT NULL,
  NUM_PAIRS INTEGER NOT NULL,
  NUM_SENTENCES_ADDED INTEGER NOT NULL,
  NUM_SENTENCES_REMOVED INTEGER NOT NULL,
  NUM_SENTENCES_CHANGED INTEGER NOT NULL,
  NUM_REFACTORS INTEGER NOT NULL,
  NUM_WORD_EDITS INTEGER NOT NULL,
  PRIMARY KEY (SOURCE, A_ID)
);
CREATE TABLE IF NOT EXISTS diff_runs (
  SOURCE TEXT NOT NULL,
  A_ID TEXT NOT NULL,
  V_OLD_ID INTEGER NOT NULL,
  V_NEW_ID INTEGER NOT NULL,
  DIGEST TEXT NOT NULL,
  PRIMARY KEY (SOURCE, A_ID, V_OLD_ID, V_NEW_ID)
);
)sql";

constexpr const char* kPairWhere =
    " WHERE SOURCE = ?1 AND A_ID = ?2 AND V_OLD_ID = ?3 AND V_NEW_ID = ?4";

// Prepared statement bound to one connection.
class Statement {
 public:
  Statement(sqlite3* db, const std::string& sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK) {
      throw Error(std::string("sqlite prepare failed: ") + sqlite3_errmsg(db));
    }
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  ~Statement() { sqlite3_finalize(stmt_); }

  Statement& bind(int idx, const std::string& v) {
    check(sqlite3_bind_text(stmt_, idx, v.data(), static_cast<int>(v.size()),
                            SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind(int idx, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, idx, v));
    return *this;
  }
  Statement& bind(int idx, std::size_t v) {
    return bind(idx, static_cast<std::int64_t>(v));
  }
  Statement& bind_null(int idx) {
    check(sqlite3_bind_null(stmt_, idx));
    return *this;
  }
  // Empty strings are stored as NULL.
  Statement& bind_optional(int idx, const std::string& v) {
    return v.empty() ? bind_null(idx) : bind(idx, v);
  }
  Statement& bind_pair(const PairKey& k) {
    return bind(1, k.source).bind(2, k.a_id).bind(3, k.v_old_id).bind(4, k.v_new_id);
  }

  // True while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(std::string("sqlite step failed: ") + sqlite3_errmsg(db_));
  }
  void run() {
    while (step()) {
    }
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p == nullptr
               ? std::string()
               : std::string(reinterpret_cast<const char*>(p),
                             static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)));
  }
  bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  std::size_t size(int col) const { return static_cast<std::size_t>(integer(col)); }
  int columns() const { return sqlite3_column_count(stmt_); }
  std::string column_name(int col) const { return sqlite3_column_name(stmt_, col); }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) {
      throw Error(std::string("sqlite bind failed: ") + sqlite3_errmsg(db_));
    }
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

PairKey read_pair(const Statement& s) {
  return {s.text(0), s.text(1), s.integer(2), s.integer(3)};
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Store Store::open(const std::filesystem::path& path) {
  sqlite3* db = nullptr;
  if (sqlite3_open(path.string().c_str(), &db) != SQLITE_OK) {
    std::string msg = db ? sqlite3_errmsg(db) : "out of memory";
    sqlite3_close(db);
    throw Error("cannot open store " + path.string() + ": " + msg);
  }
  Store store(db);
  store.exec(kSchema);
  return store;
}

Store::Store(Store&& other) noexcept : db_(std::exchange(other.db_, nullptr)) {}

Store& Store::operator=(Store&& other) noexcept {
  if (this != &other) {
    sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
  }
  return *this;
}

Store::~Store() { sqlite3_close(db_); }

void Store::exec(const std::string& sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw Error("sqlite: " + msg);
  }
}

Store::Transaction::Transaction(Store& store) : store_(store) {
  store_.exec("BEGIN");
}

Store::Transaction::~Transaction() {
  if (!done_) {
    try {
      store_.exec("ROLLBACK");
    } catch (const Error&) {
    }
  }
}

void Store::Transaction::commit() {
  store_.exec("COMMIT");
  done_ = true;
}

bool Store::upsert_article(const ArticleVersion& v) {
  Statement exists(db_,
                   "SELECT 1 FROM articles WHERE SOURCE = ?1 AND A_ID = ?2 AND "
                   "VERSION_ID = ?3");
  exists.bind(1, v.source).bind(2, v.a_id).bind(3, v.version_id);
  const bool existed = exists.step();

  Statement s(db_,
              "INSERT OR REPLACE INTO articles (SOURCE, A_ID, VERSION_ID, TITLE, "
              "URL, TEXT, CREATED, ARCHIVE_URL, NUM_VERSIONS) VALUES "
              "(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, NULL)");
  s.bind(1, v.source).bind(2, v.a_id).bind(3, v.version_id).bind(4, v.title);
  s.bind(5, v.url).bind(6, v.text).bind(7, v.created);
  if (v.archive_url) {
    s.bind(8, *v.archive_url);
  } else {
    s.bind_null(8);
  }
  s.run();
  return existed;
}

void Store::refresh_version_counts() {
  exec(
      "UPDATE articles SET NUM_VERSIONS = (SELECT COUNT(*) FROM articles a2 "
      "WHERE a2.SOURCE = articles.SOURCE AND a2.A_ID = articles.A_ID)");
}

std::vector<ArticleKey> Store::article_keys() const {
  Statement s(db_, "SELECT DISTINCT SOURCE, A_ID FROM articles ORDER BY SOURCE, A_ID");
  std::vector<ArticleKey> out;
  while (s.step()) out.push_back({s.text(0), s.text(1)});
  return out;
}

std::vector<ArticleVersion> Store::versions(const ArticleKey& key) const {
  Statement s(db_,
              "SELECT SOURCE, A_ID, VERSION_ID, TITLE, URL, TEXT, CREATED, "
              "ARCHIVE_URL FROM articles WHERE SOURCE = ?1 AND A_ID = ?2 "
              "ORDER BY VERSION_ID");
  s.bind(1, key.source).bind(2, key.a_id);
  std::vector<ArticleVersion> out;
  while (s.step()) {
    ArticleVersion v;
    v.source = s.text(0);
    v.a_id = s.text(1);
    v.version_id = s.integer(2);
    v.title = s.text(3);
    v.url = s.text(4);
    v.text = s.text(5);
    v.created = s.text(6);
    if (!s.is_null(7)) v.archive_url = s.text(7);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::int64_t> Store::num_versions(const ArticleKey& key) const {
  Statement s(db_,
              "SELECT NUM_VERSIONS FROM articles WHERE SOURCE = ?1 AND A_ID = ?2 "
              "LIMIT 1");
  s.bind(1, key.source).bind(2, key.a_id);
  if (!s.step() || s.is_null(0)) return std::nullopt;
  return s.integer(0);
}

std::size_t Store::article_row_count() const {
  Statement s(db_, "SELECT COUNT(*) FROM articles");
  s.step();
  return s.size(0);
}

std::optional<std::string> Store::pair_digest(const PairKey& key) const {
  Statement s(db_, std::string("SELECT DIGEST FROM diff_runs") + kPairWhere);
  s.bind_pair(key);
  if (!s.step()) return std::nullopt;
  return s.text(0);
}

std::vector<PairKey> Store::diffed_pairs() const {
  Statement s(db_,
              "SELECT SOURCE, A_ID, V_OLD_ID, V_NEW_ID FROM diff_runs ORDER BY "
              "SOURCE, A_ID, V_OLD_ID, V_NEW_ID");
  std::vector<PairKey> out;
  while (s.step()) out.push_back(read_pair(s));
  return out;
}

void Store::delete_pair(const PairKey& key) {
  for (const char* table : {"sentence_diffs", "word_diffs", "refactors",
                            "sentence_stats", "diff_runs"}) {
    Statement s(db_, std::string("DELETE FROM ") + table + kPairWhere);
    s.bind_pair(key).run();
  }
}

void Store::replace_pair(const PairDiff& diff, const std::string& digest) {
  delete_pair(diff.key);
  {
    Statement s(db_,
                "INSERT INTO sentence_diffs (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, "
                "SENTENCE_ID, SENT_OLD, SENT_NEW, TAG_OLD, TAG_NEW) VALUES "
                "(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9)");
    for (const auto& r : diff.rows) {
      s.bind_pair(r.pair).bind(5, r.sentence_id);
      s.bind_optional(6, r.sent_old).bind_optional(7, r.sent_new);
      s.bind_optional(8, r.tag_old).bind_optional(9, r.tag_new);
      s.run();
    }
  }
  {
    Statement s(db_,
                "INSERT INTO word_diffs (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, "
                "OLD_SENTENCE_ID, NEW_SENTENCE_ID, EDIT_ID, KIND, OLD_START, "
                "OLD_END, NEW_START, NEW_END, OLD_TEXT, NEW_TEXT) VALUES "
                "(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11, ?12, ?13, ?14)");
    for (const auto& w : diff.word_diffs) {
      s.bind_pair(w.pair).bind(5, w.old_sentence_id).bind(6, w.new_sentence_id);
      s.bind(7, w.edit_id).bind(8, w.kind).bind(9, w.old_start).bind(10, w.old_end);
      s.bind(11, w.new_start).bind(12, w.new_end);
      s.bind(13, w.old_text).bind(14, w.new_text);
      s.run();
    }
  }
  {
    Statement s(db_,
                "INSERT INTO refactors (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, OLD_IDX, "
                "NEW_IDX, DIRECTION, REMOVAL_RANK) VALUES "
                "(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)");
    for (const auto& r : diff.refactors) {
      s.bind_pair(r.pair).bind(5, r.old_idx).bind(6, r.new_idx);
      s.bind(7, r.direction).bind(8, r.removal_rank);
      s.run();
    }
  }
  {
    const auto& m = diff.summary;
    Statement s(db_,
                "INSERT INTO sentence_stats (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, "
                "NUM_SENTENCES_OLD, NUM_SENTENCES_NEW, NUM_SENTENCES_ADDED, "
                "NUM_SENTENCES_REMOVED, NUM_SENTENCES_CHANGED, "
                "NUM_SENTENCES_UNCHANGED, NUM_REFACTORS, NUM_WORD_EDITS) VALUES "
                "(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11, ?12)");
    s.bind_pair(m.pair).bind(5, m.num_sentences_old).bind(6, m.num_sentences_new);
    s.bind(7, m.num_sentences_added).bind(8, m.num_sentences_removed);
    s.bind(9, m.num_sentences_changed).bind(10, m.num_sentences_unchanged);
    s.bind(11, m.num_refactors).bind(12, m.num_word_edits);
    s.run();
  }
  Statement s(db_,
              "INSERT INTO diff_runs (SOURCE, A_ID, V_OLD_ID, V_NEW_ID, DIGEST) "
              "VALUES (?1, ?2, ?3, ?4, ?5)");
  s.bind_pair(diff.key).bind(5, digest).run();
}

void Store::rebuild_article_stats() {
  exec(
      "DELETE FROM article_stats;"
      "INSERT INTO article_stats (SOURCE, A_ID, NUM_PAIRS, NUM_SENTENCES_ADDED, "
      "NUM_SENTENCES_REMOVED, NUM_SENTENCES_CHANGED, NUM_REFACTORS, "
      "NUM_WORD_EDITS) SELECT SOURCE, A_ID, COUNT(*), SUM(NUM_SENTENCES_ADDED), "
      "SUM(NUM_SENTENCES_REMOVED), SUM(NUM_SENTENCES_CHANGED), "
      "SUM(NUM_REFACTORS), SUM(NUM_WORD_EDITS) FROM sentence_stats "
      "GROUP BY SOURCE, A_ID");
}

namespace {

constexpr const char* kDiffColumns =
    "SELECT SOURCE, A_ID, V_OLD_ID, V_NEW_ID, SENTENCE_ID, SENT_OLD, SENT_NEW, "
    "TAG_OLD, TAG_NEW FROM sentence_diffs";
constexpr const char* kDiffOrder =
    " ORDER BY SOURCE, A_ID, V_OLD_ID, V_NEW_ID, SENTENCE_ID";

std::vector<DiffRecord> read_diffs(Statement& s) {
  std::vector<DiffRecord> out;
  while (s.step()) {
    out.push_back({read_pair(s), s.size(4), s.text(5), s.text(6), s.text(7),
                   s.text(8)});
  }
  return out;
}

constexpr const char* kRefactorColumns =
    "SELECT SOURCE, A_ID, V_OLD_ID, V_NEW_ID, OLD_IDX, NEW_IDX, DIRECTION, "
    "REMOVAL_RANK FROM refactors";
constexpr const char* kRefactorOrder =
    " ORDER BY SOURCE, A_ID, V_OLD_ID, V_NEW_ID, REMOVAL_RANK";

std::vector<RefactorRecord> read_refactors(Statement& s) {
  std::vector<RefactorRecord> out;
  while (s.step()) {
    out.push_back({read_pair(s), s.size(4), s.size(5), s.text(6), s.size(7)});
  }
  return out;
}

}  // namespace

std::vector<DiffRecord> Store::sentence_diffs() const {
  Statement s(db_, std::string(kDiffColumns) + kDiffOrder);
  return read_diffs(s);
}

std::vector<DiffRecord> Store::sentence_diffs(const PairKey& key) const {
  Statement s(db_, std::string(kDiffColumns) + kPairWhere + kDiffOrder);
  s.bind_pair(key);
  return read_diffs(s);
}

std::vector<WordDiffRecord> Store::word_diffs() const {
  Statement s(db_,
              "SELECT SOURCE, A_ID, V_OLD_ID, V_NEW_ID, OLD_SENTENCE_ID, "
              "NEW_SENTENCE_ID, EDIT_ID, KIND, OLD_START, OLD_END, NEW_START, "
              "NEW_END, OLD_TEXT, NEW_TEXT FROM word_diffs ORDER BY SOURCE, A_ID, "
              "V_OLD_ID, V_NEW_ID, OLD_SENTENCE_ID, NEW_SENTENCE_ID, EDIT_ID");
  std::vector<WordDiffRecord> out;
  while (s.step()) {
    out.push_back({read_pair(s), s.size(4), s.size(5), s.size(6), s.text(7),
                   s.size(8), s.size(9), s.size(10), s.size(11), s.text(12),
                   s.text(13)});
  }
  return out;
}

std::vector<RefactorRecord> Store::refactors() const {
  Statement s(db_, std::string(kRefactorColumns) + kRefactorOrder);
  return read_refactors(s);
}

std::vector<RefactorRecord> Store::refactors(const PairKey& key) const {
  Statement s(db_, std::string(kRefactorColumns) + kPairWhere + kRefactorOrder);
  s.bind_pair(key);
  return read_refactors(s);
}

std::vector<PairSummary> Store::pair_summaries() const {
  Statement s(db_,
              "SELECT SOURCE, A_ID, V_OLD_ID, V_NEW_ID, NUM_SENTENCES_OLD, "
              "NUM_SENTENCES_NEW, NUM_SENTENCES_ADDED, NUM_SENTENCES_REMOVED, "
              "NUM_SENTENCES_CHANGED, NUM_SENTENCES_UNCHANGED, NUM_REFACTORS, "
              "NUM_WORD_EDITS FROM sentence_stats ORDER BY SOURCE, A_ID, "
              "V_OLD_ID, V_NEW_ID");
  std::vector<PairSummary> out;
  while (s.step()) {
    out.push_back({read_pair(s), s.size(4), s.size(5), s.size(6), s.size(7),
                   s.size(8), s.size(9), s.size(10), s.size(11)});
  }
  return out;
}

const std::vector<std::string>& Store::table_names() {
  static const std::vector<std::string> kTables = {
      "articles", "sentence_diffs", "word_diffs", "refactors", "sentence_stats",
      "article_stats"};
  return kTables;
}

std::vector<std::filesystem::path> Store::export_csv(
    const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& table : table_names()) {
    // Primary-key order keeps exports byte-stable.
    static const std::map<std::string, std::string> kOrder = {
        {"articles", "1, 2, 3"},
        {"sentence_diffs", "1, 2, 3, 4, 5"},
        {"word_diffs", "1, 2, 3, 4, 5, 6, 7"},
        {"refactors", "1, 2, 3, 4, 8"},
        {"sentence_stats", "1, 2, 3, 4"},
        {"article_stats", "1, 2"}};
    Statement s(db_, "SELECT * FROM " + table + " ORDER BY " + kOrder.at(table));
    const auto path = dir / (table + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (int c = 0; c < s.columns(); ++c) {
      out << (c ? "," : "") << s.column_name(c);
    }
    out << "\n";
    while (s.step()) {
      for (int c = 0; c < s.columns(); ++c) {
        out << (c ? "," : "") << csv_field(s.text(c));
      }
      out << "\n";
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace revdiff
