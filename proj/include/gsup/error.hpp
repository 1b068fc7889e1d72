#pragma once

#include <stdexcept>
#include <string>

namespace gsup {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of a formula (log of a non-positive number,
// violated hypothesis, malformed sequence).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure ran out of refinement budget without settling.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed its hard work cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, double smallest_eigenvalue)
      : Error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gsup
