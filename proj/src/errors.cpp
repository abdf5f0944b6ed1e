#include "mpeccq/errors.hpp"

namespace mpeccq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::UnknownVariable: return "UNKNOWN_VARIABLE";
    case ErrorCode::EmptySet: return "EMPTY_SET";
    case ErrorCode::PointNotInSet: return "POINT_NOT_IN_SET";
    case ErrorCode::InfeasiblePoint: return "INFEASIBLE_POINT";
    case ErrorCode::NoMultiplier: return "NO_MULTIPLIER";
    case ErrorCode::DirectionNotCritical: return "DIRECTION_NOT_CRITICAL";
    case ErrorCode::LpUnbounded: return "LP_UNBOUNDED";
    case ErrorCode::PrerequisiteFailed: return "PREREQUISITE_FAILED";
    case ErrorCode::MissingObjective: return "MISSING_OBJECTIVE";
    case ErrorCode::DirectionNotInLinCone: return "DIRECTION_NOT_IN_LIN_CONE";
    case ErrorCode::BaseNotOnGraph: return "BASE_NOT_ON_GRAPH";
    case ErrorCode::Usage: return "USAGE";
  }
  return "UNKNOWN";
}

}  // namespace mpeccq
