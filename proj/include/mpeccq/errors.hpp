#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpeccq {

enum class ErrorCode {
  DimensionMismatch,
  ParseError,
  UnknownVariable,
  EmptySet,
  PointNotInSet,
  InfeasiblePoint,
  NoMultiplier,
  DirectionNotCritical,
  LpUnbounded,
  PrerequisiteFailed,
  MissingObjective,
  DirectionNotInLinCone,
  BaseNotOnGraph,
  Usage,
};

std::string_view to_string(ErrorCode code);

/// Typed failure raised by every module; `code()` is stable and used by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mpeccq
