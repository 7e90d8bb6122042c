#pragma once

#include <stdexcept>
#include <string>

namespace invstream {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse failure with source position (1-based).
struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

struct SortError : Error {
  using Error::Error;
};

// Bad interaction with the external solver process.
struct SolverError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace invstream
