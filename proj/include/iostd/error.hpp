#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iostd {

enum class ErrorCode {
  StackUnderflow,
  TagPoolExhausted,
  UnboundVariable,
  TypeMismatch,
  DomainOverflow,
  ArityMismatch,
  IllegalInput,
  EmptyInitialSet,
  BudgetExceeded,
  DivergenceAt,
  Parse,
  Io,
  Usage,
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the library. The code is the stable,
/// machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iostd
