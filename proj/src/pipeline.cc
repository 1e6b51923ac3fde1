#include "revdiff/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <optional>
#include <set>
#include <thread>

#include "revdiff/error.h"

namespace revdiff {

std::string DiffConfig::fingerprint() const {
  char t[32];
  std::snprintf(t, sizeof t, "%.17g", threshold.value());
  std::string out = "sim=" + sim.describe() + ";T=" + t;
  if (lemmatizer.table_size() > 0) {
    out += ";lemmas=" + lemma_source + "#" + std::to_string(lemmatizer.table_size());
  }
  return out;
}

EditExtraction extract_edits(const PreparedDocument& old_doc,
                             const PreparedDocument& new_doc,
                             const SentenceScorer& sim, MatchThreshold t) {
  EditExtraction x;
  x.forward = match_directional(old_doc, new_doc, sim, t);
  x.backward = match_directional(new_doc, old_doc, sim, t);
  x.graph = build_match_graph(x.forward, x.backward);
  x.tags = derive_tags(old_doc.sentences, new_doc.sentences, x.graph);

  std::vector<Edge> edges;
  edges.reserve(x.graph.size());
  for (const auto& e : x.graph.edges()) edges.push_back({e.old_idx, e.new_idx});
  x.refactors = identify_refactors(edges);

  for (const auto& e : x.graph.edges()) {
    if (classify_change(old_doc.sentences.at(e.old_idx),
                        new_doc.sentences.at(e.new_idx)) == Change::kUnchanged) {
      continue;
    }
    x.word_diffs.push_back({e.old_idx, e.new_idx,
                            word_diff(old_doc.tokens[e.old_idx - 1],
                                      new_doc.tokens[e.new_idx - 1])});
  }
  return x;
}

namespace {

std::string join_span(const std::vector<std::string>& tokens, std::size_t begin,
                      std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string pair_label(const PairKey& k) {
  return k.source + "/" + k.a_id + " v" + std::to_string(k.v_old_id) + "-v" +
         std::to_string(k.v_new_id);
}

}  // namespace

PairDiff diff_pair(const ArticleVersion& v_old, const ArticleVersion& v_new,
                   const DiffConfig& config) {
  const auto old_doc = PreparedDocument::from_text(v_old.text, config.lemmatizer);
  const auto new_doc = PreparedDocument::from_text(v_new.text, config.lemmatizer);
  const EditExtraction x = extract_edits(old_doc, new_doc, config.sim, config.threshold);

  PairDiff d;
  d.key = {v_old.source, v_old.a_id, v_old.version_id, v_new.version_id};
  const std::size_t rows = std::max(old_doc.size(), new_doc.size());
  d.rows.reserve(rows);
  for (std::size_t k = 1; k <= rows; ++k) {
    DiffRecord r;
    r.pair = d.key;
    r.sentence_id = k;
    if (k <= old_doc.size()) {
      r.sent_old = old_doc.sentences.at(k);
      r.tag_old = x.tags.old_tags[k - 1].serialize();
    }
    if (k <= new_doc.size()) {
      r.sent_new = new_doc.sentences.at(k);
      r.tag_new = x.tags.new_tags[k - 1].serialize();
    }
    d.rows.push_back(std::move(r));
  }

  for (const auto& wd : x.word_diffs) {
    const auto& old_tokens = old_doc.tokens[wd.old_idx - 1].tokens;
    const auto& new_tokens = new_doc.tokens[wd.new_idx - 1].tokens;
    for (std::size_t e = 0; e < wd.edits.size(); ++e) {
      const auto& ed = wd.edits[e];
      d.word_diffs.push_back({d.key, wd.old_idx, wd.new_idx, e + 1,
                              std::string(to_string(ed.kind)), ed.old_begin,
                              ed.old_end, ed.new_begin, ed.new_end,
                              join_span(old_tokens, ed.old_begin, ed.old_end),
                              join_span(new_tokens, ed.new_begin, ed.new_end)});
    }
  }

  for (std::size_t r = 0; r < x.refactors.removed.size(); ++r) {
    const auto& rm = x.refactors.removed[r];
    d.refactors.push_back({d.key, rm.edge.old_idx, rm.edge.new_idx,
                           std::string(to_string(rm.direction)), r + 1});
  }

  PairSummary& s = d.summary;
  s.pair = d.key;
  s.num_sentences_old = old_doc.size();
  s.num_sentences_new = new_doc.size();
  for (const auto& t : x.tags.old_tags) {
    if (t.op == TagOp::kRemoved) ++s.num_sentences_removed;
    if (t.op == TagOp::kMatched) {
      ++(t.change == Change::kChanged ? s.num_sentences_changed
                                      : s.num_sentences_unchanged);
    }
  }
  for (const auto& t : x.tags.new_tags) {
    if (t.op == TagOp::kAdded) ++s.num_sentences_added;
  }
  s.num_refactors = d.refactors.size();
  s.num_word_edits = d.word_diffs.size();
  return d;
}

std::string pair_digest(const PairDiff& diff, const DiffConfig& config) {
  std::string buf = config.fingerprint();
  auto field = [&](const std::string& v) {
    buf.push_back('\x1f');
    buf += v;
  };
  auto num = [&](std::size_t v) { field(std::to_string(v)); };
  for (const auto& r : diff.rows) {
    num(r.sentence_id);
    field(r.sent_old);
    field(r.sent_new);
    field(r.tag_old);
    field(r.tag_new);
  }
  for (const auto& w : diff.word_diffs) {
    num(w.old_sentence_id);
    num(w.new_sentence_id);
    num(w.edit_id);
    field(w.kind);
    num(w.old_start);
    num(w.old_end);
    num(w.new_start);
    num(w.new_end);
  }
  for (const auto& r : diff.refactors) {
    num(r.old_idx);
    num(r.new_idx);
    field(r.direction);
    num(r.removal_rank);
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(stable_hash(buf)));
  return hex;
}

namespace {

struct Job {
  const ArticleVersion* v_old;
  const ArticleVersion* v_new;
  std::optional<PairDiff> result;
  std::string error;
};

void run_jobs(std::vector<Job>& jobs, const DiffConfig& config) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i].result = diff_pair(*jobs[i].v_old, *jobs[i].v_new, config);
      } catch (const std::exception& e) {
        jobs[i].error = e.what();
      }
    }
  };
  const std::size_t n = std::min(std::max<std::size_t>(config.workers, 1), jobs.size());
  if (n <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
}

}  // namespace

DiffReport diff_corpus(Store& store, const DiffConfig& config) {
  DiffReport report;
  std::set<PairKey> current;
  bool wrote = false;

  const auto keys = store.article_keys();
  std::size_t next_article = 0;
  while (next_article < keys.size()) {
    // Load articles until the batch holds enough pairs.
    std::vector<std::vector<ArticleVersion>> loaded;
    std::vector<Job> jobs;
    std::size_t pending = 0;
    while (next_article < keys.size() && pending < config.batch_size) {
      loaded.push_back(store.versions(keys[next_article++]));
      if (loaded.back().size() >= 2) pending += loaded.back().size() - 1;
    }
    for (const auto& versions : loaded) {
      for (std::size_t v = 0; v + 1 < versions.size(); ++v) {
        jobs.push_back({&versions[v], &versions[v + 1], std::nullopt, {}});
      }
    }
    run_jobs(jobs, config);

    std::optional<Store::Transaction> tx;
    for (auto& job : jobs) {
      const PairKey key{job.v_old->source, job.v_old->a_id, job.v_old->version_id,
                        job.v_new->version_id};
      current.insert(key);
      ++report.pairs_processed;
      if (!job.result) {
        report.failures.push_back(pair_label(key) + ": " + job.error);
        continue;
      }
      const std::string digest = pair_digest(*job.result, config);
      if (store.pair_digest(key) == digest) {
        ++report.pairs_unchanged;
        continue;
      }
      if (!tx) tx.emplace(store);
      store.replace_pair(*job.result, digest);
      ++report.pairs_written;
    }
    if (tx) {
      tx->commit();
      wrote = true;
    }
  }

  std::optional<Store::Transaction> tx;
  for (const auto& key : store.diffed_pairs()) {
    if (current.contains(key)) continue;
    if (!tx) tx.emplace(store);
    store.delete_pair(key);
    ++report.pairs_removed;
  }
  if (wrote || tx) {
    if (!tx) tx.emplace(store);
    store.rebuild_article_stats();
  }
  if (tx) tx->commit();
  return report;
}

}  // namespace revdiff
