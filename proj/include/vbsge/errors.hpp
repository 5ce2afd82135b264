#pragma once

#include <stdexcept>
#include <string>

namespace vbs {

/// Shape mismatch in a tensor contraction.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller passed an argument outside an operation's domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed its residual or convergence check.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Requested dense object exceeds the desk-scale memory budget.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t dimension)
      : std::runtime_error(what), dimension_(dimension) {}
  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::size_t dimension_;
};

/// An oracle verification clause failed.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vbs
