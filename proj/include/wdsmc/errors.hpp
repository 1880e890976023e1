#pragma once

#include <stdexcept>
#include <string>

namespace wdsmc {

// Input/shape violations on distributions and transport problems.
struct EmptyInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ZeroMassError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NegativeMassError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidSpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IndexOutOfRangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Solver could not certify an optimum within its pivot budget.
struct NumericalFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulation-side failures.
struct PlacementFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPositiveGapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateTrajectoryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inference-side failures.
struct PriorExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TotalDegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HistoryTooShortError : std::logic_error {
  using std::logic_error::logic_error;
};

// Harness failures, mapped to process exit codes by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonMonotoneTimesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wdsmc
