#pragma once

#include <stdexcept>
#include <string>

#include "densitylab/numeric.hpp"

namespace densitylab {

enum class ErrorCode {
  PredicateCapExceeded,
  EnumerationBudgetExceeded,
  IndexBeyondSet,
  CardinalityMismatch,
  UnknownInfinitude,
  InvalidArgument,
  WitnessTooSparse,
  NoViolationFound,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A horizon beyond a predicate cap or the enumeration budget. Carries the
/// offending horizon so callers can report it.
class BudgetError : public Error {
 public:
  BudgetError(ErrorCode code, Integer horizon, Integer limit)
      : Error(code, "horizon " + horizon.get_str() + " exceeds limit " + limit.get_str()),
        horizon_(std::move(horizon)),
        limit_(std::move(limit)) {}

  const Integer& horizon() const noexcept { return horizon_; }
  const Integer& limit() const noexcept { return limit_; }

 private:
  Integer horizon_;
  Integer limit_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& expected, const std::string& input)
      : Error(ErrorCode::ParseError,
              "at position " + std::to_string(position) + ": expected " + expected + " in '" +
                  input + "'"),
        position_(position),
        expected_(expected) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PredicateCapExceeded: return "PredicateCapExceeded";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::IndexBeyondSet: return "IndexBeyondSet";
    case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorCode::UnknownInfinitude: return "UnknownInfinitude";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::WitnessTooSparse: return "WitnessTooSparse";
    case ErrorCode::NoViolationFound: return "NoViolationFound";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace densitylab
