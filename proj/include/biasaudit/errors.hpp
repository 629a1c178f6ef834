#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biasaudit {

enum class ErrorKind {
  Io,
  MalformedFile,
  CorruptRecord,
  BadMagic,
  Truncated,
  NonFinite,
  Parse,
  InvalidArgument,
  EmptySignature,
  MassMismatch,
  Infeasible,
  ZeroRow,
  DimensionMismatch,
  OutOfBounds,
  Alignment,
  Divergence,
  UnknownKind,
  Config,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers
// (and the CLI's exit-code mapping) branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace biasaudit
