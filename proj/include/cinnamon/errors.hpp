#pragma once

#include <stdexcept>
#include <string>

namespace cinnamon {

/// Malformed input document (JSON, CSV).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input parsed but violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown credential, unknown email, missing or expired token.
class AuthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Authenticated actor whose role is not granted the operation.
class PermissionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Duplicate key (email, idempotency clash) or locked resource.
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cinnamon
