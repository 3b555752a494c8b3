#pragma once

#include <stdexcept>
#include <string>

namespace curvatura {

// Error hierarchy shared by all modules. Everything derives from
// curvatura::Error so callers can catch the library as a whole.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A chart point lies outside the chart domain of the ambient space.
struct ChartDomainError : Error {
  using Error::Error;
};

// A numerical procedure lost significance (step underflow, cancellation).
struct NumericError : Error {
  using Error::Error;
};

// The differential of an immersion dropped rank at a parameter point.
struct ImmersionDegeneracyError : Error {
  using Error::Error;
};

// Gram-Schmidt pivot breakdown while completing an adapted frame.
struct FrameDegeneracyError : Error {
  using Error::Error;
};

// A finite-difference stencil would leave a non-periodic parameter domain.
struct StencilError : Error {
  using Error::Error;
};

// A tube radius exceeds the focal-radius validity window.
struct FocalRadiusError : Error {
  using Error::Error;
};

// An operation precondition was violated (unit vector, index range, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// Operation not supported by this ambient kind (e.g. J on a real space form).
struct UnsupportedOperationError : Error {
  using Error::Error;
};

}  // namespace curvatura
