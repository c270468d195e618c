#pragma once

#include <stdexcept>
#include <string>

namespace nvsync {

// precondition on inputs violated (bad N, wrong phase count, non-real sync formula, ...)
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// a search or root solve found nothing admissible
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// step refinement did not reach tolerance
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual(residual) {}
  double residual;
};

}  // namespace nvsync
