#ifndef REVDIFF_PIPELINE_H_
#define REVDIFF_PIPELINE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "revdiff/aligner.h"
#include "revdiff/refactor.h"
#include "revdiff/segmenter.h"
#include "revdiff/similarity.h"
#include "revdiff/store.h"

namespace revdiff {

struct DiffConfig {
  SentenceSimilarity sim;
  MatchThreshold threshold{0.5};
  Lemmatizer lemmatizer;
  // Identifies the lemma table in the stored fingerprint.
  std::string lemma_source;
  std::size_t workers = 1;
  // Version pairs computed between two store writes.
  std::size_t batch_size = 256;

  // Everything that changes the stored output, as one string.
  std::string fingerprint() const;
};

// Word-level edits of one matched edge whose sentences differ.
struct SentenceWordDiff {
  std::size_t old_idx = 0;
  std::size_t new_idx = 0;
  std::vector<AtomicEdit> edits;
};

// Everything extracted for one version pair before it is flattened into rows.
struct EditExtraction {
  DirectionalMap forward;
  DirectionalMap backward;
  MatchGraph graph;
  TagLists tags;
  RefactorSet refactors;
  std::vector<SentenceWordDiff> word_diffs;
};

// Matching in both directions, tagging, refactor detection and word diffs.
EditExtraction extract_edits(const PreparedDocument& old_doc,
                             const PreparedDocument& new_doc,
                             const SentenceScorer& sim, MatchThreshold t);

// Segments both versions and flattens extract_edits into table rows.
PairDiff diff_pair(const ArticleVersion& v_old, const ArticleVersion& v_new,
                   const DiffConfig& config);

// Content hash of the rows of a pair together with the config fingerprint.
std::string pair_digest(const PairDiff& diff, const DiffConfig& config);

struct DiffReport {
  std::size_t pairs_processed = 0;
  std::size_t pairs_written = 0;
  std::size_t pairs_unchanged = 0;
  std::size_t pairs_removed = 0;
  // "<source>/<a_id> v<old>-v<new>: <message>" per failed pair.
  std::vector<std::string> failures;
};

// Diffs every adjacent version pair of every article. Pairs are computed by
// a pool of config.workers threads; all writes happen on the calling thread.
// Pairs whose rows and config are unchanged are not rewritten, so a second
// run over the same store leaves the file untouched.
DiffReport diff_corpus(Store& store, const DiffConfig& config);

}  // namespace revdiff

#endif  // REVDIFF_PIPELINE_H_
