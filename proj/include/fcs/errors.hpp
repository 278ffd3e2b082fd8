#pragma once

#include <stdexcept>
#include <string>

namespace fcs {

// Shape or dimension mismatch between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Letter or index outside its allowed range.
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// (site spin, auxiliary spin) pair admits no covariant embedding.
struct FeasibilityError : std::domain_error {
  using std::domain_error::domain_error;
};

// A value that should hold by construction did not (e.g. a Popescu
// relation or a Hermiticity check on a computed expectation).
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brute-force oracle refused an input that is too large to enumerate.
struct OracleScaleError : std::length_error {
  using std::length_error::length_error;
};

// The decay certificate needs a strongly mixing transfer operator.
struct CertificateUnavailable : std::domain_error {
  using std::domain_error::domain_error;
};

// Variational sweep found no feasible auxiliary spin.
struct EmptySweepError : std::domain_error {
  using std::domain_error::domain_error;
};

// Unknown model name or bad model parameters.
struct ModelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input file or failed output write.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fcs
