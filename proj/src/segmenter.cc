#include "revdiff/segmenter.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>

#include "revdiff/error.h"
#include "text_util.h"

namespace revdiff {

namespace text {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
  if (error) {
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) append_utf8(out, c);
  return out;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }
bool is_upper(char32_t c) { return u_isupper(static_cast<UChar32>(c)); }
bool is_control(char32_t c) {
  return u_charType(static_cast<UChar32>(c)) == U_CONTROL_CHAR;
}

std::string to_lower(std::string_view s) {
  // ASCII fast path; most keys never leave it.
  if (std::all_of(s.begin(), s.end(),
                  [](char ch) { return static_cast<unsigned char>(ch) < 0x80; })) {
    std::string out(s);
    for (char& ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::u32string_view strip_punct(std::u32string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_punct(s[begin])) ++begin;
  while (end > begin && is_punct(s[end - 1])) --end;
  return s.substr(begin, end - begin);
}

}  // namespace text

namespace {

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_closing(char32_t c) {
  switch (c) {
    case U'"':
    case U'\'':
    case U'”':  // right double quotation mark
    case U'’':  // right single quotation mark
    case U'»':  // right guillemet
    case U')':
    case U']':
      return true;
    default:
      return false;
  }
}

bool is_opening_quote(char32_t c) {
  switch (c) {
    case U'"':
    case U'\'':
    case U'“':
    case U'‘':
    case U'«':
      return true;
    default:
      return false;
  }
}

bool is_opening_punct(char32_t c) {
  return is_opening_quote(c) || c == U'(' || c == U'[';
}

// The whitespace-delimited word that ends at `end` (exclusive), without
// leading opening quotes or brackets.
std::u32string word_before(const std::u32string& t, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !text::is_space(t[begin - 1])) --begin;
  while (begin < end && is_opening_punct(t[begin])) ++begin;
  return t.substr(begin, end - begin);
}

bool is_abbreviation(const std::u32string& word) {
  static const std::vector<std::u32string> kAbbrev = [] {
    std::vector<std::u32string> out;
    for (const auto& a : sentence_abbreviations()) {
      out.push_back(text::decode_utf8(a));
    }
    return out;
  }();
  return std::find(kAbbrev.begin(), kAbbrev.end(), word) != kAbbrev.end();
}

// Trims the slice and collapses internal whitespace runs to single spaces.
std::string clean_slice(const std::u32string& t, std::size_t begin,
                        std::size_t end) {
  std::string out;
  bool pending_space = false;
  for (std::size_t i = begin; i < end; ++i) {
    if (text::is_space(t[i])) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    text::append_utf8(out, t[i]);
  }
  return out;
}

}  // namespace

SentenceList::SentenceList(std::vector<std::string> sentences)
    : sentences_(std::move(sentences)) {}

const std::string& SentenceList::at(std::size_t index) const {
  if (index == 0 || index > sentences_.size()) {
    throw InvalidArgument("sentence index " + std::to_string(index) +
                          " out of range 1.." +
                          std::to_string(sentences_.size()));
  }
  return sentences_[index - 1];
}

std::string normalize_text(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  std::string composed;
  if (U_SUCCESS(status)) {
    icu::UnicodeString normalized = nfc->normalize(u, status);
    if (U_SUCCESS(status)) normalized.toUTF8String(composed);
  }
  if (!U_SUCCESS(status)) u.toUTF8String(composed);

  const std::u32string t = text::decode_utf8(composed);
  std::string out;
  out.reserve(composed.size());
  bool in_space_run = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    char32_t c = t[i];
    if (c == U'\r') {
      if (i + 1 < t.size() && t[i + 1] == U'\n') ++i;
      c = U'\n';
    }
    if (c == U'\n') {
      out.push_back('\n');
      in_space_run = false;
      continue;
    }
    if (text::is_space(c)) {
      if (!in_space_run) out.push_back(' ');
      in_space_run = true;
      continue;
    }
    if (text::is_control(c)) continue;
    in_space_run = false;
    text::append_utf8(out, c);
  }
  return out;
}

const std::vector<std::string>& sentence_abbreviations() {
  static const std::vector<std::string> kList = {"Mr.", "Mrs.", "Dr.", "U.S.",
                                                 "U.K.", "St.", "No.", "vs."};
  return kList;
}

SentenceList split_sentences(std::string_view text_in) {
  const std::u32string t = text::decode_utf8(text_in);
  const std::size_t n = t.size();
  std::vector<std::string> out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    std::string s = clean_slice(t, begin, end);
    if (!s.empty()) out.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(t[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < n && is_terminator(t[run_end])) ++run_end;
    std::size_t j = run_end;
    while (j < n && is_closing(t[j])) ++j;
    if (j < n && text::is_space(t[j])) {
      std::size_t k = j;
      while (k < n && text::is_space(t[k])) ++k;
      const bool next_opens =
          k < n && (text::is_upper(t[k]) || is_opening_quote(t[k]));
      const bool abbreviated =
          t[run_end - 1] == U'.' && is_abbreviation(word_before(t, run_end));
      if (next_opens && !abbreviated) {
        emit(start, j);
        start = k;
        i = k;
        continue;
      }
    }
    i = j;
  }
  if (start < n) emit(start, n);
  return SentenceList(std::move(out));
}

std::string token_key(std::string_view token) {
  const std::u32string t = text::decode_utf8(token);
  return text::to_lower(text::encode_utf8(text::strip_punct(t)));
}

std::string lemma_key(std::string_view token) {
  std::string key = token_key(token);
  for (std::string_view suffix : {std::string_view("'s"),
                                  std::string_view("\xE2\x80\x99s")}) {
    if (key.size() > suffix.size() && key.ends_with(suffix)) {
      key.resize(key.size() - suffix.size());
      std::string stripped = token_key(key);
      if (!stripped.empty()) key = std::move(stripped);
      break;
    }
  }
  return key;
}

TokenSeq tokenize(std::string_view sentence) {
  TokenSeq seq;
  const std::u32string t = text::decode_utf8(sentence);
  std::size_t i = 0;
  while (i < t.size()) {
    while (i < t.size() && text::is_space(t[i])) ++i;
    std::size_t begin = i;
    while (i < t.size() && !text::is_space(t[i])) ++i;
    if (begin == i) break;
    std::u32string_view field(t.data() + begin, i - begin);
    std::u32string_view core = text::strip_punct(field);
    if (core.empty()) continue;
    seq.tokens.push_back(text::encode_utf8(field));
    seq.keys.push_back(text::to_lower(text::encode_utf8(core)));
  }
  return seq;
}

std::vector<std::string> ngrams(const std::vector<std::string>& keys,
                                std::size_t n) {
  if (n == 0) throw InvalidArgument("ngram order must be positive");
  std::vector<std::string> out;
  if (keys.size() < n) return out;
  out.reserve(keys.size() - n + 1);
  for (std::size_t i = 0; i + n <= keys.size(); ++i) {
    std::string gram = keys[i];
    for (std::size_t k = 1; k < n; ++k) {
      gram.push_back(' ');
      gram += keys[i + k];
    }
    out.push_back(std::move(gram));
  }
  return out;
}

std::vector<std::string> ngrams(const TokenSeq& seq, std::size_t n) {
  return ngrams(seq.keys, n);
}

Lemmatizer Lemmatizer::from_table(
    std::unordered_map<std::string, std::string> table) {
  Lemmatizer l;
  for (auto& [token, lemma] : table) {
    std::string key = token_key(token);
    std::string value = token_key(lemma);
    if (!key.empty() && !value.empty()) l.table_[key] = std::move(value);
  }
  return l;
}

Lemmatizer Lemmatizer::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lemma map " + path.string());
  std::unordered_map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError("expected token<TAB>lemma", line_no);
    }
    table[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return from_table(std::move(table));
}

std::string Lemmatizer::lemma(std::string_view token) const {
  if (!table_.empty()) {
    auto it = table_.find(token_key(token));
    if (it != table_.end()) return it->second;
  }
  return lemma_key(token);
}

TokenSeq Lemmatizer::apply(const TokenSeq& seq) const {
  TokenSeq out = seq;
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    std::string l = lemma(out.tokens[i]);
    if (!l.empty()) out.keys[i] = std::move(l);
  }
  return out;
}

}  // namespace revdiff
