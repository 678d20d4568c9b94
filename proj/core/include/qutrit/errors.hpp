#pragma once

#include <stdexcept>
#include <string>

namespace qutrit {

/// Input outside the mathematical domain of an operation (bad Bloch coordinates,
/// non-Hermitian or wrong-trace matrices, |mbar| > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// maxent_mu evaluated at mbar = +-1; callers take the pure-state limit instead.
class EndpointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Base of every failure raised while estimating an integral.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No sample fell inside the physical set after the full sample budget.
class DegenerateSlice : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// A component that vanishes by symmetry was estimated as significantly non-zero.
class SymmetryViolation : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// The data region admits no frequency vector for the requested N.
class IncompatibleData : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// Every physical sample had a weight that underflowed to zero.
class NumericalUnderflow : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

}  // namespace qutrit
