#pragma once

#include <stdexcept>
#include <string>

namespace msint {

// Each error kind named by the operation contracts gets its own type so
// callers (and the CLI exit-code mapping) can tell them apart.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ReconstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MeasurementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepFailure : std::runtime_error {
  StepFailure(const std::string& what, double res, int its)
      : std::runtime_error(what), residual(res), iterations(its) {}
  double residual;
  int iterations;
};

struct NewtonFailure : std::runtime_error {
  NewtonFailure(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
  double residual;
};

}  // namespace msint
