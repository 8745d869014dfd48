#ifndef PACEKIT_ERRORS_HPP
#define PACEKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pacekit {

// Base class for everything thrown by the library. Callers that only want
// "pacekit failed" can catch this; the CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A request violates the instance bounds (reward/consumption caps or the
// rate bound).
struct BoundViolation : Error {
  using Error::Error;
};

// Request list length does not match the declared horizon.
struct LengthMismatch : Error {
  using Error::Error;
};

// Trace is not in general position (duplicate bang-per-buck ratios).
struct DegenerateTrace : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

// Distribution errors.
struct EmptySupport : Error {
  using Error::Error;
};
struct NegativeProbability : Error {
  using Error::Error;
};

// No exact Wasserstein routine exists for the given pair of families.
struct UnsupportedFamilyPair : Error {
  using Error::Error;
};

// General-position perturbation kept producing duplicate ratios.
struct PerturbationFailed : Error {
  using Error::Error;
};

// Scenario/config file problems.
struct ConfigError : Error {
  using Error::Error;
};

// CSV parse failures; message names the offending row.
struct CsvError : Error {
  using Error::Error;
};

// Filesystem or other runtime failures (distinct from bad input).
struct IoError : Error {
  using Error::Error;
};

}  // namespace pacekit

#endif  // PACEKIT_ERRORS_HPP
