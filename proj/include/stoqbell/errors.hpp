#pragma once

#include <stdexcept>
#include <string>

namespace stoqbell {

// Base type for all library failures so callers can catch in one place.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (index ranges, sizes, signs).
struct DomainError : Error {
  using Error::Error;
};

// Operator string or factor sequence not in the supported family.
struct UnsupportedOperator : Error {
  using Error::Error;
};

// Input object violates one of its own invariants.
struct ContractViolation : Error {
  using Error::Error;
};

// Cone geometry collapsed below the expected dimension (e.g. sin(phi) = 0).
struct DegenerateGeometry : Error {
  using Error::Error;
};

// Closed-form expressions hit a vanishing denominator.
struct AnalyticDegenerate : Error {
  using Error::Error;
};

// Operator failed the permutation-invariance consistency check.
struct NotPermutationInvariant : Error {
  using Error::Error;
};

}  // namespace stoqbell
