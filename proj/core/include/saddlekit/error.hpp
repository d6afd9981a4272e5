#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace saddlekit {

// Stable machine-readable codes; the CLI prints these verbatim.
enum class ErrorCode {
  kEdgeSum,
  kNonpositiveArea,
  kGluingNotInvolutive,
  kGluingNotOpposite,
  kConeAngle,
  kMalformed,
  kSingularMatrix,
  kResourceLimit,
  kCollinear,
  kAmbiguousDiamond,
  kFlipCycle,
  kNotDelaunay,
  kChewCaseFour,
  kUndecidable,
  kAmbiguousMembership,
  kMarginViolation,
  kAcceptanceRate,
  kInvalidArgument,
  kParse,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace saddlekit
