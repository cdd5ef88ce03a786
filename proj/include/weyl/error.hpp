#pragma once

#include <stdexcept>
#include <string>

namespace weyl {

/// Failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
  Domain,    // precondition on a value (p <= 1, x outside [0,1), ...)
  Shape,     // grid or length mismatch between operands
  Resource,  // configured cap exceeded (J, N, exact maximal mode)
  Format,    // malformed file or serialized input
  Numeric,   // factorization or other numerical breakdown
};

const char* to_string(ErrorKind kind) noexcept;

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

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace weyl
