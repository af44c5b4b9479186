#pragma once

#include <stdexcept>

namespace skorohod {

// Caller broke a documented precondition.
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sample point on a Lebesgue-null exceptional set; caller should resample.
struct RejectedSample : std::domain_error {
  using std::domain_error::domain_error;
};

// A computed identity that must hold by construction did not.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace skorohod
