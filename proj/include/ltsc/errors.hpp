#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltsc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A flat token list or compressed record whose dictionary block is not
/// well formed.
class MalformedDictionary : public Error {
 public:
  using Error::Error;
};

/// A meta-token id in a compressed body that has no dictionary entry.
class UnknownMetaToken : public Error {
 public:
  using Error::Error;
};

/// A token id outside the range allowed at that point. `line()` is the
/// 1-based input line when the id came from a file, 0 otherwise.
class IdOutOfRange : public Error {
 public:
  explicit IdOutOfRange(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Malformed input text (tree renderings, id files). `position()` is a
/// 0-based character offset within the offending text or line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position, std::size_t line = 0)
      : Error((line == 0 ? std::string() : "line " + std::to_string(line) + ": ") +
              what + " at position " + std::to_string(position)),
        position_(position),
        line_(line) {}

  std::size_t position() const noexcept { return position_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t position_;
  std::size_t line_;
};

class CorpusExhausted : public Error {
 public:
  using Error::Error;
};

/// A tree that cannot supply the requested kind of example.
class InsufficientTree : public Error {
 public:
  using Error::Error;
};

}  // namespace ltsc
