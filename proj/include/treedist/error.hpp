#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treedist {

// Every failure a library operation can report. The CLI maps each to a
// distinct diagnostic tag (see error_code_name).
enum class ErrorCode {
  UnrootedInput,
  RootednessMismatch,
  LabelSetMismatch,
  EdgeNotFound,
  UnknownLabel,
  DomainError,
  SyntaxError,
  NegativeWeight,
  DuplicateLabel,
  EmptyInput,
  AmbiguousMatching,
  SubsetSizeMismatch,
  UnweightedInput,
  NonConvergence,
  TooLarge,
  DegenerateVariance,
  ZeroTotalLength,
  InvalidTarget,
  RootPrune,
  NotBinary,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the Newick reader; carries a 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, std::size_t line,
             std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Raw-mode RFL with more than one admissible edge matching. The distinct
// values the distance takes over all matchings are kept for inspection.
class AmbiguousMatchingError : public Error {
 public:
  AmbiguousMatchingError(std::vector<double> candidates,
                         std::size_t matching_count);

  const std::vector<double>& candidates() const noexcept { return candidates_; }
  std::size_t matching_count() const noexcept { return matching_count_; }

 private:
  std::vector<double> candidates_;
  std::size_t matching_count_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace treedist
