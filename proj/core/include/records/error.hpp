#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace records {

enum class ErrorCode {
  InvalidArgument,
  NonConvergence,
  Unsupported,
  HorizonTooLarge,
  Undecidable,
  IndexOrder,
  DegenerateDenominator,
  TailUnbounded,
  CertificationFailed,
  CellTooSmall,
  SupportMismatch,
  WrongRegime,
  OutOfRange,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure mode named in the public API maps
/// onto one ErrorCode so callers (and the CLI exit-code table) can dispatch
/// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace records
