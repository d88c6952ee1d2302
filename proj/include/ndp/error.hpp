#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ndp {

// Stable machine codes. The names double as the `code` field of API errors
// and the prefix of CLI error lines, so never rename an existing entry.
enum class ErrorCode {
  SyntaxError,
  ArityError,
  NoSuchLine,
  NotAGoal,
  NoGoalSelected,
  OutOfScope,
  NotJustified,
  NothingToUndo,
  NothingToRedo,
  RuleDisabled,
  ShapeMismatch,
  MissingArgument,
  EigenvariableViolation,
  NoSuchAxiom,
  IoError,
  ParseError,
  ReplayError,
  ReadOnly,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::NoSuchLine: return "NoSuchLine";
    case ErrorCode::NotAGoal: return "NotAGoal";
    case ErrorCode::NoGoalSelected: return "NoGoalSelected";
    case ErrorCode::OutOfScope: return "OutOfScope";
    case ErrorCode::NotJustified: return "NotJustified";
    case ErrorCode::NothingToUndo: return "NothingToUndo";
    case ErrorCode::NothingToRedo: return "NothingToRedo";
    case ErrorCode::RuleDisabled: return "RuleDisabled";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MissingArgument: return "MissingArgument";
    case ErrorCode::EigenvariableViolation: return "EigenvariableViolation";
    case ErrorCode::NoSuchAxiom: return "NoSuchAxiom";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ReplayError: return "ReplayError";
    case ErrorCode::ReadOnly: return "ReadOnly";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<int> at = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(std::move(message)),
        at_(at) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }
  // Creation number of the offending line, when one applies.
  std::optional<int> at() const noexcept { return at_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<int> at_;
};

// Raised by both formula parsers. `position` is a byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected)
      : Error(ErrorCode::SyntaxError,
              "at position " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace ndp
