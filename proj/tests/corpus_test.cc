#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <tuple>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "revdiff/aligner.h"
#include "revdiff/analytics.h"
#include "revdiff/error.h"
#include "revdiff/ingest.h"
#include "revdiff/pipeline.h"
#include "revdiff/store.h"
#include "revdiff/synthetic.h"
#include "revdiff/timeparse.h"
#include "test_util.h"

namespace revdiff {
namespace {

using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

// Sentence k with six words no other sentence uses.
std::string S(int k) {
  const std::string n = std::to_string(k);
  return "Item" + n + " alpha" + n + " beta" + n + " gamma" + n + " delta" + n + " epsilon" +
         n + ".";
}

// S(k) with its last word replaced.
std::string Edited(int k) {
  const std::string n = std::to_string(k);
  return "Item" + n + " alpha" + n + " beta" + n + " gamma" + n + " delta" + n + " changed.";
}

std::string Join(const std::vector<std::string>& s) { return join_sentences(s); }

std::vector<std::string> Range(int from, int to) {
  std::vector<std::string> out;
  for (int k = from; k <= to; ++k) out.push_back(S(k));
  return out;
}

ArticleVersion V(std::string a_id, std::int64_t v, std::string text,
                 std::string created = "2021-01-01T00:00:00Z", std::string source = "nyt") {
  ArticleVersion out;
  out.source = std::move(source);
  out.a_id = std::move(a_id);
  out.version_id = v;
  out.title = "t";
  out.url = "u";
  out.text = std::move(text);
  out.created = std::move(created);
  return out;
}

DiffConfig Unigram(double t = 0.5) {
  DiffConfig c;
  c.sim = SentenceSimilarity::max_unigram();
  c.threshold = MatchThreshold(t);
  return c;
}

// ---- timestamps ----------------------------------------------------------

TEST(ParseRfc3339, Forms) {
  EXPECT_EQ(parse_rfc3339("1970-01-01T00:00:00Z"), 0.0);
  EXPECT_EQ(parse_rfc3339("1970-01-01T01:00:00+01:00"), 0.0);
  EXPECT_EQ(parse_rfc3339("1970-01-01 00:00:01.5"), 1.5);
  EXPECT_EQ(parse_rfc3339("2021-01-05t10:00:00z"), 1609840800.0);
  EXPECT_EQ(parse_rfc3339("2020-02-29T00:00:00Z"), 1582934400.0);
  EXPECT_EQ(parse_rfc3339("2021-02-29T00:00:00Z"), std::nullopt);
  EXPECT_EQ(parse_rfc3339("2021-13-01T00:00:00Z"), std::nullopt);
  EXPECT_EQ(parse_rfc3339("yesterday"), std::nullopt);
  EXPECT_EQ(parse_rfc3339(format_rfc3339(1609840800)), 1609840800.0);
}

// ---- ingest --------------------------------------------------------------

const char* kRecord1 =
    R"({"source":"nyt","a_id":"a1","version_id":0,"title":"T","url":"U","text":"One. Two.","created":"2021-01-01T00:00:00Z","archive_url":null})";
const char* kRecord2 =
    R"({"source":"nyt","a_id":"a1","version_id":1,"title":"T","url":"U","text":"One. Three.","created":"2021-01-01T03:00:00Z"})";

TEST(IngestJsonl, EmptyFile) {
  TempDir dir("ingest");
  WriteFile(dir / "in.jsonl", "");
  Store store = Store::open(":memory:");
  const IngestReport r = ingest_jsonl(dir / "in.jsonl", store);
  EXPECT_EQ(r.accepted, 0u);
  EXPECT_TRUE(r.errors.empty());
}

TEST(IngestJsonl, ValidRecordsAndVersionCounts) {
  TempDir dir("ingest");
  WriteFile(dir / "in.jsonl", std::string(kRecord1) + "\n\n" + kRecord2 + "\n");
  Store store = Store::open(":memory:");
  const IngestReport r = ingest_jsonl(dir / "in.jsonl", store);
  EXPECT_EQ(r.accepted, 2u);
  EXPECT_EQ(store.article_row_count(), 2u);
  EXPECT_EQ(store.num_versions({"nyt", "a1"}), 2);
  const auto versions = store.versions({"nyt", "a1"});
  ASSERT_EQ(versions.size(), 2u);
  EXPECT_EQ(versions[1].text, "One. Three.");
  EXPECT_EQ(versions[0].archive_url, std::nullopt);
}

TEST(IngestJsonl, MalformedLinesReportedWithLineNumbers) {
  TempDir dir("ingest");
  WriteFile(dir / "in.jsonl",
            std::string(kRecord1) + "\n" +
                R"({"source":"nyt","version_id":0,"text":"x","created":"2021-01-01T00:00:00Z"})" +
                "\n{not json\n" +
                R"({"source":"nyt","a_id":"b","version_id":-1,"text":"x","created":"2021-01-01T00:00:00Z"})" +
                "\n" +
                R"({"source":"nyt","a_id":"b","version_id":0,"text":"x","created":"soon"})" + "\n");
  Store store = Store::open(":memory:");
  const IngestReport r = ingest_jsonl(dir / "in.jsonl", store);
  EXPECT_EQ(r.accepted, 1u);
  ASSERT_EQ(r.errors.size(), 4u);
  EXPECT_EQ(r.errors[0].line, 2u);
  EXPECT_NE(r.errors[0].message.find("a_id"), std::string::npos);
  EXPECT_EQ(r.errors[1].line, 3u);
  EXPECT_EQ(r.errors[2].line, 4u);
  EXPECT_EQ(r.errors[3].line, 5u);
  EXPECT_EQ(store.article_row_count(), 1u);
}

TEST(IngestJsonl, DuplicateIsLastWriteWins) {
  TempDir dir("ingest");
  std::string second = kRecord1;
  second.replace(second.find("One. Two."), 9, "Replaced.");
  WriteFile(dir / "in.jsonl", std::string(kRecord1) + "\n" + second + "\n");
  Store store = Store::open(":memory:");
  const IngestReport r = ingest_jsonl(dir / "in.jsonl", store);
  EXPECT_EQ(r.accepted, 2u);
  EXPECT_EQ(r.duplicates, 1u);
  EXPECT_EQ(store.versions({"nyt", "a1"}).at(0).text, "Replaced.");
}

TEST(IngestJsonl, MissingFileThrows) {
  Store store = Store::open(":memory:");
  EXPECT_THROW(ingest_jsonl("/nonexistent/revdiff.jsonl", store), Error);
}

// ---- diff pipeline -------------------------------------------------------

TEST(DiffCorpus, CountsAdjacentPairs) {
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, Join(Range(1, 3))));
  store.upsert_article(V("a", 1, Join(Range(1, 4))));
  store.upsert_article(V("a", 2, Join(Range(2, 4))));
  store.upsert_article(V("single", 0, Join(Range(1, 2))));
  const DiffReport r = diff_corpus(store, Unigram());
  EXPECT_EQ(r.pairs_processed, 2u);
  EXPECT_EQ(r.pairs_written, 2u);
  EXPECT_EQ(store.diffed_pairs().size(), 2u);
}

TEST(DiffCorpus, NoMultiVersionArticle) {
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, Join(Range(1, 3))));
  EXPECT_EQ(diff_corpus(store, Unigram()).pairs_processed, 0u);
}

TEST(DiffCorpus, DeletedThirdSentenceIsTaggedR) {
  Store store = Store::open(":memory:");
  std::vector<std::string> next = Range(1, 5);
  next.erase(next.begin() + 2);
  store.upsert_article(V("a", 0, Join(Range(1, 5))));
  store.upsert_article(V("a", 1, Join(next)));
  diff_corpus(store, Unigram());
  const auto rows = store.sentence_diffs();
  ASSERT_EQ(rows.size(), 5u);  // max(|old|, |new|)
  std::size_t r_count = 0;
  for (const auto& row : rows) {
    if (row.tag_old == "R") {
      ++r_count;
      EXPECT_EQ(row.sentence_id, 3u);
    }
  }
  EXPECT_EQ(r_count, 1u);
  EXPECT_TRUE(rows[4].sent_new.empty());
  EXPECT_TRUE(rows[4].tag_new.empty());
  EXPECT_EQ(rows[4].tag_old, "M 4 U");
}

TEST(DiffCorpus, WordDiffsForChangedMatches) {
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, Join({S(1), S(2)})));
  store.upsert_article(V("a", 1, Join({S(1), Edited(2)})));
  diff_corpus(store, Unigram());
  const auto wd = store.word_diffs();
  ASSERT_EQ(wd.size(), 1u);
  EXPECT_EQ(wd[0].old_sentence_id, 2u);
  EXPECT_EQ(wd[0].kind, "replace");
  EXPECT_EQ(wd[0].old_text, "epsilon2.");
  EXPECT_EQ(wd[0].new_text, "changed.");
}

TEST(DiffCorpus, RowInvariantAndWorkerCountDoesNotMatter) {
  CorpusOptions opts;
  opts.articles = 30;
  const auto corpus = synthetic_corpus(51, opts);
  Store one = Store::open(":memory:");
  Store four = Store::open(":memory:");
  for (const auto& v : corpus) {
    one.upsert_article(v);
    four.upsert_article(v);
  }
  DiffConfig c1 = Unigram();
  DiffConfig c4 = Unigram();
  c4.workers = 4;
  c4.batch_size = 7;
  const DiffReport r1 = diff_corpus(one, c1);
  const DiffReport r4 = diff_corpus(four, c4);
  EXPECT_EQ(r1.pairs_processed, r4.pairs_processed);
  EXPECT_TRUE(r1.failures.empty());
  EXPECT_EQ(one.sentence_diffs(), four.sentence_diffs());
  EXPECT_EQ(one.word_diffs(), four.word_diffs());
  EXPECT_EQ(one.refactors(), four.refactors());

  for (const PairSummary& s : one.pair_summaries()) {
    const auto rows = one.sentence_diffs(s.pair);
    ASSERT_EQ(rows.size(), std::max(s.num_sentences_old, s.num_sentences_new));
    for (const auto& row : rows) {
      ASSERT_EQ(!row.tag_old.empty(), row.sentence_id <= s.num_sentences_old);
      ASSERT_EQ(!row.tag_new.empty(), row.sentence_id <= s.num_sentences_new);
      if (!row.tag_old.empty()) ASSERT_NO_THROW(SentenceTag::parse(row.tag_old));
      if (!row.tag_new.empty()) ASSERT_NO_THROW(SentenceTag::parse(row.tag_new));
    }
  }
}

TEST(DiffCorpus, RerunLeavesFileBytesUnchanged) {
  TempDir dir("idem");
  const auto db = dir / "store.db";
  {
    Store store = Store::open(db);
    CorpusOptions opts;
    opts.articles = 10;
    for (const auto& v : synthetic_corpus(52, opts)) store.upsert_article(v);
    diff_corpus(store, Unigram());
  }
  const std::string before = ReadFile(db);
  {
    Store store = Store::open(db);
    const DiffReport r = diff_corpus(store, Unigram());
    EXPECT_EQ(r.pairs_written, 0u);
    EXPECT_EQ(r.pairs_unchanged, r.pairs_processed);
  }
  EXPECT_EQ(ReadFile(db), before);
  {
    // A different threshold rewrites every pair.
    Store store = Store::open(db);
    const DiffReport r = diff_corpus(store, Unigram(0.6));
    EXPECT_EQ(r.pairs_written, r.pairs_processed);
  }
}

TEST(DiffCorpus, StalePairsRemovedWhenAVersionAppears) {
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, Join(Range(1, 3))));
  store.upsert_article(V("a", 2, Join(Range(1, 4))));
  diff_corpus(store, Unigram());
  EXPECT_EQ(store.diffed_pairs(), (std::vector<PairKey>{{"nyt", "a", 0, 2}}));
  store.upsert_article(V("a", 1, Join(Range(1, 3))));
  const DiffReport r = diff_corpus(store, Unigram());
  EXPECT_EQ(r.pairs_removed, 1u);
  EXPECT_EQ(store.diffed_pairs(),
            (std::vector<PairKey>{{"nyt", "a", 0, 1}, {"nyt", "a", 1, 2}}));
  EXPECT_TRUE(store.sentence_diffs({"nyt", "a", 0, 2}).empty());
}

TEST(Store, CsvExportQuotesFields) {
  TempDir dir("csv");
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, "He said \"no, never\". Then left."));
  store.upsert_article(V("a", 1, "He said \"no, never\". Then he left."));
  diff_corpus(store, Unigram());
  const auto files = store.export_csv(dir.path());
  EXPECT_EQ(files.size(), Store::table_names().size());
  const std::string csv = ReadFile(dir / "sentence_diffs.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "SOURCE,A_ID,V_OLD_ID,V_NEW_ID,SENTENCE_ID,SENT_OLD,SENT_NEW,TAG_OLD,TAG_NEW");
  EXPECT_NE(csv.find("\"He said \"\"no, never\"\".\""), std::string::npos);
}

// ---- analytics -----------------------------------------------------------

// Counts straight from the stored tags.
ActionStats TagScan(const Store& store) {
  ActionStats s;
  std::map<std::tuple<std::string, std::string, std::int64_t>, std::size_t> lengths;
  for (const DiffRecord& d : store.sentence_diffs()) {
    if (!d.tag_old.empty()) {
      const SentenceTag t = SentenceTag::parse(d.tag_old);
      s.edits += t.is_changed_match();
      s.deletions += t.op == TagOp::kRemoved;
      auto& n = lengths[{d.pair.source, d.pair.a_id, d.pair.v_old_id}];
      n = std::max(n, d.sentence_id);
    }
    if (!d.tag_new.empty()) {
      s.additions += SentenceTag::parse(d.tag_new).op == TagOp::kAdded;
      auto& n = lengths[{d.pair.source, d.pair.a_id, d.pair.v_new_id}];
      n = std::max(n, d.sentence_id);
    }
  }
  s.refactors = store.refactors().size();
  s.pairs = store.diffed_pairs().size();
  for (const auto& [k, n] : lengths) s.total_sentences += n;
  return s;
}

TEST(SummarizeActions, OneAdditionOverTenSentences) {
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, Join(Range(1, 5))));
  store.upsert_article(V("a", 1, Join({S(1), S(2), S(4), S(5), S(9)})));
  diff_corpus(store, Unigram());
  const ActionStats s = summarize_actions(store);
  EXPECT_EQ(s.additions, 1u);
  EXPECT_EQ(s.deletions, 1u);
  EXPECT_EQ(s.total_sentences, 10u);
  EXPECT_DOUBLE_EQ(s.percent(s.additions), 10.0);
  EXPECT_EQ(s, TagScan(store));
}

TEST(SummarizeActions, IdenticalPairAndEmptyStore) {
  Store store = Store::open(":memory:");
  EXPECT_EQ(summarize_actions(store), ActionStats{});
  store.upsert_article(V("a", 0, Join(Range(1, 4))));
  store.upsert_article(V("a", 1, Join(Range(1, 4))));
  diff_corpus(store, Unigram());
  const ActionStats s = summarize_actions(store);
  EXPECT_EQ(s.edits + s.additions + s.deletions + s.refactors, 0u);
  EXPECT_EQ(s.percent(s.edits), 0.0);
  EXPECT_EQ(s.total_sentences, 8u);
}

TEST(SummarizeActions, AgreesWithTagScanOnSyntheticCorpus) {
  Store store = Store::open(":memory:");
  for (const auto& v : synthetic_corpus(53)) store.upsert_article(v);
  diff_corpus(store, Unigram());
  const ActionStats s = summarize_actions(store);
  EXPECT_GT(s.edits, 0u);
  EXPECT_GT(s.refactors, 0u);
  EXPECT_EQ(s, TagScan(store));
}

TEST(VersionDynamics, EditFraction) {
  Store store = Store::open(":memory:");
  EXPECT_TRUE(version_dynamics(store).empty());
  std::vector<std::string> next = Range(1, 10);
  next[2] = Edited(3);
  next[6] = Edited(7);
  store.upsert_article(V("a", 0, Join(Range(1, 10))));
  store.upsert_article(V("a", 1, Join(next)));
  diff_corpus(store, Unigram());
  const auto rows = version_dynamics(store);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].version, 0);
  EXPECT_DOUBLE_EQ(rows[0].edit_fraction, 0.2);
  EXPECT_DOUBLE_EQ(rows[0].add_fraction, 0.0);
}

TEST(PositionDistribution, Deciles) {
  EXPECT_EQ(position_decile(1, 10), 0u);
  EXPECT_EQ(position_decile(10, 10), 9u);
  EXPECT_EQ(position_decile(1, 1), 0u);
  EXPECT_EQ(position_decile(15, 15), 9u);
  EXPECT_THROW(position_decile(0, 10), InvalidArgument);
  EXPECT_THROW(position_decile(11, 10), InvalidArgument);
  // Every decile receives between floor and ceil of len/10 positions.
  for (std::size_t len = 1; len <= 40; ++len) {
    std::array<std::size_t, kDeciles> hits{};
    for (std::size_t i = 1; i <= len; ++i) ++hits[position_decile(i, len)];
    for (std::size_t h : hits) {
      ASSERT_GE(h, len / 10);
      ASSERT_LE(h, (len + 9) / 10);
    }
  }
}

TEST(PositionDistribution, AdditionsAtTopLandInFirstDecile) {
  Store store = Store::open(":memory:");
  EXPECT_TRUE(position_distribution(store).empty());
  for (int a = 0; a < 3; ++a) {
    const std::string id = "a" + std::to_string(a);
    store.upsert_article(V(id, 0, Join(Range(1, 9))));
    std::vector<std::string> next = Range(1, 9);
    next.insert(next.begin(), S(100 + a));
    store.upsert_article(V(id, 1, Join(next)));
  }
  diff_corpus(store, Unigram());
  const auto rows = position_distribution(store);
  const auto add = std::find_if(rows.begin(), rows.end(),
                                [](const PositionRow& r) { return r.action == "addition"; });
  ASSERT_NE(add, rows.end());
  EXPECT_EQ(add->total, 3u);
  EXPECT_DOUBLE_EQ(add->percent[0], 100.0);
}

TEST(PositionDistribution, RowsSumToHundred) {
  Store store = Store::open(":memory:");
  for (const auto& v : synthetic_corpus(54)) store.upsert_article(v);
  diff_corpus(store, Unigram());
  const auto rows = position_distribution(store);
  EXPECT_EQ(rows.size(), 5u);
  for (const auto& r : rows) {
    const double sum = std::accumulate(r.percent.begin(), r.percent.end(), 0.0);
    EXPECT_NEAR(sum, 100.0, 1e-9) << r.action;
  }
}

TEST(UpdateTimeStats, MedianHours) {
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, "x", "2021-01-01T00:00:00Z"));
  store.upsert_article(V("a", 1, "x", "2021-01-01T03:00:00Z"));
  store.upsert_article(V("solo", 0, "x", "2021-01-01T00:00:00Z", "ap"));
  store.upsert_article(V("b", 0, "x", "2021-01-02T00:00:00Z"));
  store.upsert_article(V("b", 1, "x", "2021-01-01T00:00:00Z"));  // goes backwards
  const UpdateTimeStats s = update_time_stats(store);
  ASSERT_EQ(s.sources.size(), 1u);
  EXPECT_EQ(s.sources[0].source, "nyt");
  EXPECT_EQ(s.sources[0].intervals, 1u);
  EXPECT_DOUBLE_EQ(s.sources[0].median_hours, 3.0);
  EXPECT_EQ(s.warnings, 1u);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
  EXPECT_THROW(quantile({}, 0.5), InvalidArgument);
}

TEST(FlagSpecialSentences, Examples) {
  EXPECT_EQ(flag_special_sentences("CORRECTION: An earlier version of this story misspelled a name."),
            (SpecialFlags{true, false}));
  EXPECT_EQ(flag_special_sentences("Additional reporting by Simon Browning."),
            (SpecialFlags{false, true}));
  EXPECT_EQ(flag_special_sentences("The storm hit Texas."), (SpecialFlags{false, false}));
  // One noisy hit is not enough unless raw mode is asked for.
  EXPECT_FALSE(flag_special_sentences("The article was long.").correction);
  EXPECT_TRUE(flag_special_sentences("The article was long.", FlagMode::kRaw).correction);
  EXPECT_TRUE(flag_special_sentences("This article was revised.").correction);
  EXPECT_TRUE(flag_special_sentences("Editing by Mark Heinrich.").contributor);
}

TEST(CountSpecialAdditions, CountsAddedSentencesOnly) {
  Store store = Store::open(":memory:");
  store.upsert_article(V("a", 0, Join(Range(1, 3))));
  store.upsert_article(V("a", 1, Join(Range(1, 3)) + " Reporting by Jane Roe."));
  diff_corpus(store, Unigram());
  const SpecialSentenceCounts c = count_special_additions(store);
  EXPECT_EQ(c.added, 1u);
  EXPECT_EQ(c.contributors, 1u);
  EXPECT_EQ(c.corrections, 0u);
}

}  // namespace
}  // namespace revdiff
