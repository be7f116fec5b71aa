#pragma once

#include <stdexcept>
#include <string>

namespace sg {

enum class ErrorCode {
  kInvalidArgument = 1,
  kParse = 2,
  kValidation = 3,
  kCfl = 4,
  kNumeric = 5,
  kLimit = 6,
  kIo = 7,
  kInternal = 8,
};

const char* error_code_name(ErrorCode code);

/// All failures in the core surface as this exception; the C API maps the
/// code to sg_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sg
