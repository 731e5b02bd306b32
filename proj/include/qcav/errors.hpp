#pragma once

#include <stdexcept>
#include <string>

namespace qcav {

/// Input outside the domain of a formula or operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem size beyond a hard cap (exact enumeration). Maps to CLI exit code 3.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace qcav
