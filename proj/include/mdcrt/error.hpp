#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdcrt {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  Singular,
  CapExceeded,
  CrtInconsistent,
  ConditionViolated,
  BoundExceeded,
  ParseError,
  IoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mdcrt
