#pragma once

#include <stdexcept>
#include <string>

namespace topsteer {

enum class ErrorCode {
  invalid_argument,
  io_error,
  parse_error,
  degenerate_projection,
  complexity_limit,
  numerical_degeneracy,
  integration_blowup,
  invalid_configuration,
  calibration_failure,
  steering_abort,
  empty_input,
  degenerate_partition,
  internal,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception. The C API maps `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

}  // namespace topsteer
