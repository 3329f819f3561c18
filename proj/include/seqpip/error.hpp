#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqpip {

// Domain error: bad input file, infeasible request, invariant violation.
// The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Error tied to a position in a text input (1-based line number).
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace seqpip
