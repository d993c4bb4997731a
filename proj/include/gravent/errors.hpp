#pragma once

#include <stdexcept>
#include <string>

namespace gravent {

// Bad input: non-positive physical constants, malformed grids, unknown enums.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A named validity guard of the expansion was violated (e.g. d > 10*delta_x).
class ValidityError : public std::domain_error {
 public:
  ValidityError(std::string guard, const std::string& what)
      : std::domain_error(what), guard_(std::move(guard)) {}
  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

// First-order / small-coupling approximation left its regime.
class RegimeError : public std::domain_error {
 public:
  RegimeError(std::string quantity, const std::string& what)
      : std::domain_error(what), quantity_(std::move(quantity)) {}
  const std::string& quantity() const noexcept { return quantity_; }

 private:
  std::string quantity_;
};

// Fock-space truncation too small for the requested object.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a function contract (wrong table contents, non-Hermitian input...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Eigen/SVD output outside the tolerance band of a well-posed problem.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gravent
