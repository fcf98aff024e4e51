#pragma once

#include <stdexcept>
#include <string>

namespace predopt {

/// Input data violates a documented invariant (negative demand, bad dims, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A file could not be parsed; message carries file/field context.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Instance sampling could not satisfy its invariants within the retry budget.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An API was called outside its contract (wrong shapes, non-binary fix, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment / CLI configuration is inconsistent or incomplete.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed; indicates a bug, not bad user input.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training diverged (non-finite loss).
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace predopt
