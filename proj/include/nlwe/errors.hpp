#pragma once

#include <stdexcept>
#include <string>

namespace nlwe {

/// Operand shapes do not agree (matrix size, subsystem split, label sets).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter lies outside the range for which a construction is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An input violates a documented precondition or an output failed its
/// postcondition (e.g. a non-Hermitian operator passed to the eigensolver).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A dual certificate failed verification, so no bound may be reported.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlwe
