#include "revdiff/ingest.h"

#include <fstream>

#include "json.hpp"
#include "revdiff/error.h"
#include "revdiff/timeparse.h"

namespace revdiff {

namespace {

using nlohmann::json;

std::string required_string(const json& j, const char* field, std::size_t line_no) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    throw ParseError(std::string("missing field '") + field + "'", line_no);
  }
  if (it->is_string()) {
    std::string v = it->get<std::string>();
    if (v.empty()) throw ParseError(std::string("empty field '") + field + "'", line_no);
    return v;
  }
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw ParseError(std::string("field '") + field + "' must be a string", line_no);
}

std::string optional_string(const json& j, const char* field, std::size_t line_no) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw ParseError(std::string("field '") + field + "' must be a string", line_no);
  }
  return it->get<std::string>();
}

}  // namespace

ArticleVersion parse_article_record(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw ParseError("record must be a JSON object", line_no);

  ArticleVersion v;
  v.source = required_string(j, "source", line_no);
  v.a_id = required_string(j, "a_id", line_no);

  auto vid = j.find("version_id");
  if (vid == j.end() || !vid->is_number_integer() || vid->get<std::int64_t>() < 0) {
    throw ParseError("'version_id' must be a non-negative integer", line_no);
  }
  v.version_id = vid->get<std::int64_t>();

  auto text = j.find("text");
  if (text == j.end() || !text->is_string()) {
    throw ParseError("missing field 'text'", line_no);
  }
  v.text = text->get<std::string>();

  v.created = required_string(j, "created", line_no);
  if (!parse_rfc3339(v.created)) {
    throw ParseError("'created' is not an RFC 3339 timestamp", line_no);
  }
  v.title = optional_string(j, "title", line_no);
  v.url = optional_string(j, "url", line_no);
  if (auto it = j.find("archive_url"); it != j.end() && !it->is_null()) {
    v.archive_url = optional_string(j, "archive_url", line_no);
  }
  return v;
}

IngestReport ingest_jsonl(const std::filesystem::path& path, Store& store) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());

  IngestReport report;
  Store::Transaction tx(store);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const ArticleVersion v = parse_article_record(line, line_no);
      if (store.upsert_article(v)) ++report.duplicates;
      ++report.accepted;
    } catch (const ParseError& e) {
      report.errors.push_back({line_no, e.what()});
    }
  }
  if (in.bad()) throw Error("read error on " + path.string());
  store.refresh_version_counts();
  tx.commit();
  return report;
}

}  // namespace revdiff
