#ifndef REVDIFF_ERROR_H_
#define REVDIFF_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace revdiff {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A precondition of an operation was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace revdiff

#endif  // REVDIFF_ERROR_H_
