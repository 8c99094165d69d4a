#pragma once

#include <stdexcept>
#include <string>

namespace nilsphere {

/// Inputs of mismatched dimension p.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (non-skew matrix,
/// non-orthogonal k, alpha <= -1, malformed spherical index, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical budget was exceeded or an accuracy target could not be met.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nilsphere
