#ifndef REVDIFF_INGEST_H_
#define REVDIFF_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "revdiff/store.h"

namespace revdiff {

struct IngestIssue {
  std::size_t line = 0;
  std::string message;
};

struct IngestReport {
  std::size_t accepted = 0;
  // Records whose (source, a_id, version_id) was already stored; the newer
  // record replaced the older one.
  std::size_t duplicates = 0;
  std::vector<IngestIssue> errors;
};

// Validates one JSON line into an ArticleVersion; throws ParseError.
ArticleVersion parse_article_record(std::string_view line, std::size_t line_no = 0);

// Reads newline-delimited JSON records into the store in one transaction.
// Malformed lines are reported and skipped; an unreadable file throws.
IngestReport ingest_jsonl(const std::filesystem::path& path, Store& store);

}  // namespace revdiff

#endif  // REVDIFF_INGEST_H_
