#pragma once

#include <stdexcept>
#include <string>

namespace kquant {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A potential whose form omega_0 + i ddbar(phi) fails to be positive somewhere.
struct NonKahlerError : Error {
  using Error::Error;
};

/// A Hermitian form that is not Hermitian positive definite.
struct NotPositiveDefiniteError : Error {
  using Error::Error;
};

/// Input that is well-formed but outside what an operation supports.
struct DomainError : Error {
  using Error::Error;
};

/// Malformed text input; carries a line number when known.
struct ParseError : Error {
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  int line;
};

}  // namespace kquant
