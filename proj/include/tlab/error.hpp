#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tlab {

enum class ErrorCode {
  Syntax,
  UnknownIdentifier,
  Domain,
  IllConditioned,
  NotInDomain,
  SizeMismatch,
  TimeBudgetExceeded,
  Degenerate,
  MonotonicityViolation,
  Ambiguous,
  NoExit,
  NoTangent,
  Config,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code tells callers (and the
/// CLI exit-code mapping) which contract was violated.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Parse failure carrying the byte offset into the source text.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error(ErrorCode::Syntax, what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

}  // namespace tlab
