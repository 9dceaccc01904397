#pragma once

#include <stdexcept>
#include <string>

namespace phh {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A named parameter constraint failed; carries which one and by how much.
struct ConstraintViolation : std::runtime_error {
  ConstraintViolation(std::string name_, double value_, std::string bound_)
      : std::runtime_error("constraint violation: " + name_ + " = " +
                           std::to_string(value_) + " violates " + bound_),
        name(std::move(name_)), value(value_), bound(std::move(bound_)) {}
  std::string name;
  double value;
  std::string bound;
};

struct LimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PatternError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonAdmissible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceFailure : std::runtime_error {
  ConvergenceFailure(const std::string& what_, double last_estimate_)
      : std::runtime_error(what_), last_estimate(last_estimate_) {}
  double last_estimate;
};

}  // namespace phh
