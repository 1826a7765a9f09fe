#pragma once

#include <stdexcept>
#include <string>

namespace helicoid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid construction parameters; field() names the offending parameter.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Input outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative procedure ran out of budget. best_bound() carries the best
// certified estimate reached so far.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_bound)
      : Error(what), best_bound_(best_bound) {}
  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_bound_;
};

}  // namespace helicoid
