#include "revdiff/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace revdiff {

namespace {

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> words = {
      "the", "a", "of", "to", "and", "in", "on", "for", "with", "at",
      "by", "from", "that", "was", "is", "as", "it", "said", "were", "after"};
  return words;
}

const std::vector<std::string>& syllables() {
  static const std::vector<std::string> s = {
      "ba", "ko", "ri", "tu", "me", "sa", "lo", "ne", "vi", "da", "pe", "gu",
      "ha", "zo", "fi", "mu", "te", "ra", "wo", "ki", "lu", "si", "no", "ve"};
  return s;
}

}  // namespace

TextGenerator::TextGenerator(std::uint64_t seed, TextOptions options)
    : options_(options), rng_(seed) {
  if (options_.vocabulary == 0) throw InvalidArgument("vocabulary must be non-empty");
  if (options_.min_words == 0 || options_.min_words > options_.max_words) {
    throw InvalidArgument("bad sentence length range");
  }
  // Three-syllable content words. 7919 is coprime to 24^3, so the index
  // permutation below never repeats a word.
  const auto& syl = syllables();
  constexpr std::size_t kSpace = 24 * 24 * 24;
  if (options_.vocabulary > kSpace) throw InvalidArgument("vocabulary too large");
  lexicon_.reserve(options_.vocabulary);
  for (std::size_t i = 0; i < options_.vocabulary; ++i) {
    const std::size_t x = (i * 7919 + 13) % kSpace;
    lexicon_.push_back(syl[x % 24] + syl[(x / 24) % 24] + syl[x / 576]);
  }

  cdf_.resize(lexicon_.size());
  double total = 0.0;
  for (std::size_t r = 0; r < lexicon_.size(); ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), options_.zipf_exponent);
    cdf_[r] = total;
  }
  for (double& c : cdf_) c /= total;
}

std::string TextGenerator::word() {
  if (rng_.chance(options_.function_word_rate)) {
    const auto& f = function_words();
    return f[rng_.below(f.size())];
  }
  const double u = rng_.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return lexicon_[static_cast<std::size_t>(it - cdf_.begin())];
}

std::vector<std::string> TextGenerator::words(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(word());
  return out;
}

std::string TextGenerator::sentence() {
  return render_sentence(words(rng_.between(options_.min_words, options_.max_words)));
}

std::vector<std::string> TextGenerator::document(std::size_t n_sentences) {
  std::vector<std::string> out;
  out.reserve(n_sentences);
  for (std::size_t i = 0; i < n_sentences; ++i) out.push_back(sentence());
  return out;
}

std::string render_sentence(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') {
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  }
  out += '.';
  return out;
}

std::vector<std::string> sentence_words(const std::string& sentence) {
  std::vector<std::string> words;
  std::istringstream in(sentence);
  for (std::string w; in >> w;) words.push_back(w);
  if (!words.empty()) {
    std::string& last = words.back();
    if (!last.empty() && last.back() == '.') last.pop_back();
    std::string& first = words.front();
    if (!first.empty() && first[0] >= 'A' && first[0] <= 'Z') {
      first[0] = static_cast<char>(first[0] - 'A' + 'a');
    }
  }
  return words;
}

std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

std::string edit_sentence(const std::string& sentence, double fraction, TextGenerator& gen) {
  std::vector<std::string> words = sentence_words(sentence);
  if (words.empty()) return render_sentence(gen.words(1));
  auto k = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(words.size())));
  k = std::clamp<std::size_t>(k, 1, words.size());
  std::vector<std::size_t> positions(words.size());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  SeededRng& rng = gen.rng();
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(positions[i], positions[i + rng.below(positions.size() - i)]);
    std::string& w = words[positions[i]];
    std::string replacement = gen.word();
    while (replacement == w) replacement = gen.word();
    w = std::move(replacement);
  }
  return render_sentence(words);
}

MutatedPair mutate(const std::vector<std::string>& old_sentences, TextGenerator& gen,
                   const MutationOptions& options) {
  SeededRng& rng = gen.rng();
  MutatedPair pair;
  pair.old_sentences = old_sentences;
  pair.edited.assign(old_sentences.size(), false);
  pair.old_to_new.assign(old_sentences.size(), std::nullopt);

  // Each slot is (old index or npos for additions, text).
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::pair<std::size_t, std::string>> slots;
  for (std::size_t i = 0; i < old_sentences.size(); ++i) {
    if (rng.chance(options.delete_rate)) continue;
    std::string text = old_sentences[i];
    if (rng.chance(options.edit_rate)) {
      const double f = options.edit_min_fraction +
                       rng.uniform() * (options.edit_max_fraction - options.edit_min_fraction);
      text = edit_sentence(text, f, gen);
      pair.edited[i] = true;
    }
    slots.emplace_back(i, std::move(text));
  }

  const std::size_t survivors = slots.size();
  for (std::size_t m = 0; survivors > 1 && m < survivors; ++m) {
    if (!rng.chance(options.move_rate)) continue;
    const std::size_t from = rng.below(slots.size());
    auto item = std::move(slots[from]);
    slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(from));
    std::size_t to = rng.below(slots.size() + 1);
    if (to == from) to = (to + 1) % (slots.size() + 1);
    slots.insert(slots.begin() + static_cast<std::ptrdiff_t>(to), std::move(item));
    ++pair.moves;
  }

  for (std::size_t i = 0; i < old_sentences.size(); ++i) {
    if (!rng.chance(options.add_rate)) continue;
    const std::size_t at = rng.below(slots.size() + 1);
    slots.insert(slots.begin() + static_cast<std::ptrdiff_t>(at), {kNone, gen.sentence()});
  }

  pair.added.assign(slots.size(), false);
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (slots[j].first == kNone) {
      pair.added[j] = true;
    } else {
      pair.old_to_new[slots[j].first] = j + 1;
    }
    pair.new_sentences.push_back(std::move(slots[j].second));
  }
  return pair;
}

std::string format_rfc3339(std::int64_t epoch_seconds) {
  const auto t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<ArticleVersion> synthetic_corpus(std::uint64_t seed, const CorpusOptions& options) {
  if (options.sources.empty()) throw InvalidArgument("corpus needs at least one source");
  if (options.min_versions == 0 || options.min_versions > options.max_versions) {
    throw InvalidArgument("bad version count range");
  }
  TextGenerator gen(seed);
  SeededRng& rng = gen.rng();
  std::vector<ArticleVersion> out;
  constexpr std::int64_t kBase = 1'577'836'800;  // 2020-01-01T00:00:00Z
  for (std::size_t a = 0; a < options.articles; ++a) {
    const std::string source = options.sources[rng.below(options.sources.size())];
    char id[16];
    std::snprintf(id, sizeof id, "a%05zu", a);
    const std::size_t n_versions = rng.between(options.min_versions, options.max_versions);
    std::vector<std::string> doc =
        gen.document(rng.between(options.min_sentences, options.max_sentences));
    std::int64_t created = kBase + static_cast<std::int64_t>(rng.below(365 * 24 * 3600));
    for (std::size_t v = 0; v < n_versions; ++v) {
      if (v > 0) {
        doc = mutate(doc, gen, options.mutation).new_sentences;
        if (doc.empty()) doc.push_back(gen.sentence());
        created += static_cast<std::int64_t>(60 + rng.below(6 * 3600));
      }
      ArticleVersion version;
      version.source = source;
      version.a_id = id;
      version.version_id = static_cast<std::int64_t>(v);
      version.title = "Article " + std::string(id);
      version.url = "https://example.org/" + source + "/" + id;
      version.text = join_sentences(doc);
      version.created = format_rfc3339(created);
      out.push_back(std::move(version));
    }
  }
  return out;
}

}  // namespace revdiff
