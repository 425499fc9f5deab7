#include "treedist/error.hpp"

#include <cstdio>

namespace treedist {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnrootedInput: return "UnrootedInput";
    case ErrorCode::RootednessMismatch: return "RootednessMismatch";
    case ErrorCode::LabelSetMismatch: return "LabelSetMismatch";
    case ErrorCode::EdgeNotFound: return "EdgeNotFound";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorCode::SubsetSizeMismatch: return "SubsetSizeMismatch";
    case ErrorCode::UnweightedInput: return "UnweightedInput";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::ZeroTotalLength: return "ZeroTotalLength";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::RootPrune: return "RootPrune";
    case ErrorCode::NotBinary: return "NotBinary";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ParseError::ParseError(ErrorCode code, const std::string& message,
                       std::size_t line, std::size_t column)
    : Error(code, message + " (line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

namespace {

std::string describe_candidates(const std::vector<double>& candidates,
                                std::size_t count) {
  std::string text = std::to_string(count) + " admissible edge matchings; values {";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", candidates[i]);
    if (i > 0) text += ", ";
    text += buf;
  }
  return text + "}";
}

}  // namespace

AmbiguousMatchingError::AmbiguousMatchingError(std::vector<double> candidates,
                                               std::size_t matching_count)
    : Error(ErrorCode::AmbiguousMatching,
            describe_candidates(candidates, matching_count)),
      candidates_(std::move(candidates)),
      matching_count_(matching_count) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace treedist
