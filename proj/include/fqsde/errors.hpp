#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fqsde {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation (p < 1, q > p, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration: driver/space mismatch, bad config key, ...
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A precondition the caller promised (adaptedness, contraction) does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Picard iteration ran out of outer iterations.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> deltas)
      : Error(what), deltas_(std::move(deltas)) {}
  const std::vector<double>& deltas() const noexcept { return deltas_; }

 private:
  std::vector<double> deltas_;
};

}  // namespace fqsde
