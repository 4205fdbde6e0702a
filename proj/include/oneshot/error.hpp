#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace oneshot {

// Precondition on arguments violated (bad axis set, eps out of range, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematical domain violated, e.g. Supp(P) not contained in Supp(Q).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A materialized object would exceed the configured cell cap.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Unreadable or malformed input/output file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rate-region budget constraints failed; carries one line per violated constraint.
class ConstraintError : public std::runtime_error {
 public:
  ConstraintError(const std::string& what, std::vector<std::string> diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

}  // namespace oneshot
