#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eei {

enum class ErrorCode {
  kDimensionMismatch,
  kNotPositiveDefinite,
  kNotPositiveSemidefinite,
  kSingularCovariance,
  kBadMu,
  kInvalidArgument,
  kDominationFailed,
  kSplitInfeasible,
  kNoConvergence,
  kUnnormalizedDensity,
  kGridTooCoarse,
  kInconsistentDensity,
  kInfeasibleDensity,
  kThresholdUnreachable,
  kSeparationFailed,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eei
