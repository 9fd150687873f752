#pragma once

#include <stdexcept>
#include <string>

namespace hesn {

// Every failure mode that crosses a module boundary. The numeric values double
// as process exit codes for the command-line tool.
enum class ErrorCode : int {
  kInvalidArgument = 2,
  kConfigParse = 3,
  kMissingFile = 4,
  kDimensionMismatch = 5,
  kNumericalBlowup = 6,
  kSingularSystem = 7,
  kSpectralRadius = 8,
  kInsufficientData = 9,
  kUntrained = 10,
  kZeroReference = 11,
  kEmptyWindow = 12,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace hesn
