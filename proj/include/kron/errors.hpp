#pragma once

#include <stdexcept>
#include <string>

namespace kron {

// Base class for all contract violations raised by this library.  The CLI
// maps these to exit code 2; anything else escaping is a plain bug.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A certified tail bound exceeds the requested tolerance (series does not
// converge fast enough, or not at all, for the given parameters).
struct TailDiverges : Error { using Error::Error; };

// The working precision cannot certify the requested digits.
struct PrecisionExhausted : Error { using Error::Error; };

// A configured search/enumeration budget would be exceeded.
struct BudgetExceeded : Error { using Error::Error; };

// Query outside the range covered by computed data.
struct OutOfRange : Error { using Error::Error; };

// Parameter outside the operation's mathematical domain.
struct DomainError : Error { using Error::Error; };

// Not enough records to form an estimate.
struct InsufficientData : Error { using Error::Error; };

// No admissible seed value found by a scan.
struct SeedInvalid : Error { using Error::Error; };

// Pell discriminant is not squarefree (or is a perfect square).
struct NotSquarefree : Error { using Error::Error; };

// Recursion/iteration depth cap reached before the target.
struct DepthExceeded : Error { using Error::Error; };

// A construction selected no levels at all.
struct EmptyConstruction : Error { using Error::Error; };

// A construction has too few levels for the requested certification range.
struct InsufficientDepth : Error { using Error::Error; };

// Requested certification range is not covered by the construction.
struct RangeError : Error { using Error::Error; };

// Rational window endpoints violate the coprimality preconditions.
struct BadWindow : Error { using Error::Error; };

// The normalizing function fails the admissibility (convergence) test.
struct PhiInadmissible : Error { using Error::Error; };

// Quadrature refinement failed to stabilize within its budget.
struct QuadratureUnstable : Error { using Error::Error; };

// Malformed input (CLI maps to exit code 1).
struct UsageError : Error { using Error::Error; };

// Filesystem failure while emitting results.
struct IoError : Error { using Error::Error; };

}  // namespace kron
