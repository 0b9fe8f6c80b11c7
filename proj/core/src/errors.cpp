#include "eei/errors.hpp"

namespace eei {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kBadMu: return "BadMu";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDominationFailed: return "DominationFailed";
    case ErrorCode::kSplitInfeasible: return "SplitInfeasible";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kUnnormalizedDensity: return "UnnormalizedDensity";
    case ErrorCode::kGridTooCoarse: return "GridTooCoarse";
    case ErrorCode::kInconsistentDensity: return "InconsistentDensity";
    case ErrorCode::kInfeasibleDensity: return "InfeasibleDensity";
    case ErrorCode::kThresholdUnreachable: return "ThresholdUnreachable";
    case ErrorCode::kSeparationFailed: return "SeparationFailed";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace eei
