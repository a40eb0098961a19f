#ifndef CHORDGRAM_ERROR_HPP
#define CHORDGRAM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chordgram {

/// Base class for all data and configuration errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised while reading a corpus stream; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised by the pattern parser; carries the byte offset of the failure.
class PatternError : public Error {
 public:
  PatternError(std::size_t offset, const std::string& msg)
      : Error("offset " + std::to_string(offset) + ": " + msg),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace chordgram

#endif  // CHORDGRAM_ERROR_HPP
