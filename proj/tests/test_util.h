// Shared generators and fixtures for the tests.
#ifndef REVDIFF_TESTS_TEST_UTIL_H_
#define REVDIFF_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "revdiff/rng.h"
#include "revdiff/segmenter.h"

namespace revdiff::testing {

// Token sequence over a vocabulary of `vocab` words w0..w{vocab-1}.
inline TokenSeq RandomTokens(SeededRng& rng, std::size_t min_len, std::size_t max_len,
                             std::size_t vocab) {
  TokenSeq t;
  const std::size_t n = rng.between(min_len, max_len);
  for (std::size_t i = 0; i < n; ++i) {
    std::string w = "w" + std::to_string(rng.below(vocab));
    t.tokens.push_back(w);
    t.keys.push_back(std::move(w));
  }
  return t;
}

inline TokenSeq Concat(const TokenSeq& a, const TokenSeq& b) {
  TokenSeq out = a;
  out.tokens.insert(out.tokens.end(), b.tokens.begin(), b.tokens.end());
  out.keys.insert(out.keys.end(), b.keys.begin(), b.keys.end());
  return out;
}

// y with the tokens of x inserted at random positions.
inline TokenSeq Embed(SeededRng& rng, const TokenSeq& x, const TokenSeq& y) {
  TokenSeq out = y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto at = static_cast<std::ptrdiff_t>(rng.below(out.size() + 1));
    out.tokens.insert(out.tokens.begin() + at, x.tokens[i]);
    out.keys.insert(out.keys.begin() + at, x.keys[i]);
  }
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("revdiff_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace revdiff::testing

#endif  // REVDIFF_TESTS_TEST_UTIL_H_
