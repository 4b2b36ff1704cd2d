#pragma once

#include <stdexcept>
#include <string>

namespace truthlab {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        column(col_) {}
};

struct ValidationError : Error {
  using Error::Error;
};

struct UnresolvedReference : Error {
  using Error::Error;
};

struct LanguageError : Error {
  using Error::Error;
};

struct PoolBudgetExceeded : Error {
  using Error::Error;
};

struct EnumerationBudgetExceeded : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct UnknownTheory : Error {
  using Error::Error;
};

struct UnknownScenario : Error {
  using Error::Error;
};

}  // namespace truthlab
