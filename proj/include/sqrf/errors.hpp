#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqrf {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  LightlikeVelocity,
  ZeroVelocity,
  ClosureViolation,
  PhotonShell,
  BoundaryCase,
  GridTooNarrow,
  GridMismatch,
  NonCommensurate,
  LabelCollision,
  BasisMismatch,
  UnknownLabel,
  ZeroSpatialMomentum,
  MassMissing,
  OffShell,
  OffGridOverflow,
  UnitarityViolation,
  NonPositiveTemperature,
  NormalizationError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::LightlikeVelocity: return "LightlikeVelocity";
    case ErrorCode::ZeroVelocity: return "ZeroVelocity";
    case ErrorCode::ClosureViolation: return "ClosureViolation";
    case ErrorCode::PhotonShell: return "PhotonShell";
    case ErrorCode::BoundaryCase: return "BoundaryCase";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonCommensurate: return "NonCommensurate";
    case ErrorCode::LabelCollision: return "LabelCollision";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ZeroSpatialMomentum: return "ZeroSpatialMomentum";
    case ErrorCode::MassMissing: return "MassMissing";
    case ErrorCode::OffShell: return "OffShell";
    case ErrorCode::OffGridOverflow: return "OffGridOverflow";
    case ErrorCode::UnitarityViolation: return "UnitarityViolation";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::NormalizationError: return "NormalizationError";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` carries the failure kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Numerical-invariant failures (as opposed to bad input).
  bool is_invariant_failure() const noexcept {
    return code_ == ErrorCode::ClosureViolation || code_ == ErrorCode::UnitarityViolation;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sqrf
