#include "hesn/error.hpp"

namespace hesn {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kConfigParse: return "config-parse";
    case ErrorCode::kMissingFile: return "missing-file";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kNumericalBlowup: return "numerical-blowup";
    case ErrorCode::kSingularSystem: return "singular-system";
    case ErrorCode::kSpectralRadius: return "spectral-radius-estimation-failure";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kUntrained: return "untrained-readout";
    case ErrorCode::kZeroReference: return "zero-reference";
    case ErrorCode::kEmptyWindow: return "empty-window";
  }
  return "unknown";
}

}  // namespace hesn
