#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace d2dsim {

// Failure in a line-oriented input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input file has the wrong overall structure (bad header, wrong schema).
class FormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration rejected; the message names the offending field path.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace d2dsim
