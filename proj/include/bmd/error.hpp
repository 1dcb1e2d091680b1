#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmd {

enum class ErrorCode {
  // input / construction
  InvalidInput,
  NotStarShaped,
  NotSymmetric,
  OriginOutside,
  TooFewVertices,
  InvalidExponent,
  NonPositiveSample,
  TooFewSamples,
  NotInCone,
  NotPD,
  BadAngleOrder,
  EmptyGrid,
  // numerical
  LeftCone,
  NoConvergence,
  NoAlternance,
  ConeViolation,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotStarShaped: return "NotStarShaped";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::OriginOutside: return "OriginOutside";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::NonPositiveSample: return "NonPositiveSample";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NotInCone: return "NotInCone";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::BadAngleOrder: return "BadAngleOrder";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::LeftCone: return "LeftCone";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoAlternance: return "NoAlternance";
    case ErrorCode::ConeViolation: return "ConeViolation";
  }
  return "Unknown";
}

/// True for failures of the numerical pipeline (as opposed to bad input).
inline bool is_numerical(ErrorCode code) {
  return code == ErrorCode::LeftCone || code == ErrorCode::NoConvergence ||
         code == ErrorCode::NoAlternance || code == ErrorCode::ConeViolation;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bmd
