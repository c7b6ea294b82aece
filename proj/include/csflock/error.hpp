#pragma once

#include <stdexcept>
#include <string>

namespace csflock {

// Bad argument to a pure evaluation (negative length, non-finite input, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A position at or behind a wall was handed to the potential.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Configuration text that cannot be turned into a valid run.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class FailureKind {
  WallContact,    // step size collapsed while resolving a wall approach
  StepUnderflow,  // error control drove dt below dt_min away from any wall
  NonFinite,      // NaN or Inf in an accepted state
};

const char* to_string(FailureKind kind) noexcept;

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(FailureKind kind, double time, const std::string& what)
      : std::runtime_error(what), kind_(kind), time_(time) {}

  FailureKind kind() const noexcept { return kind_; }
  double time() const noexcept { return time_; }

 private:
  FailureKind kind_;
  double time_;
};

}  // namespace csflock
