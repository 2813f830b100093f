#pragma once

#include <stdexcept>
#include <string>

namespace eudiv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed program text or config file.
struct ParseError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

// No halted row at or below the requested index.
struct NoHaltingIndex : Error {
  using Error::Error;
};

// dominance_check probed an input where the comparison function did not halt.
struct FunctionNotTotalWithinBudget : Error {
  using Error::Error;
};

// Inverse utility search exhausted its scan bound.
struct SearchBudgetExceeded : Error {
  using Error::Error;
};

// The program feeding a synthesis step did not halt within the eval budget.
struct SourceNotHaltedWithinBudget : Error {
  using Error::Error;
};

// A certificate failed independent re-verification.
struct InconsistentCertificate : Error {
  using Error::Error;
};

// A convergence increment exceeded its analytic bound.
struct BoundViolated : Error {
  using Error::Error;
};

// No fixed point found by iteration or bounded search.
struct FixedPointNotFound : Error {
  using Error::Error;
};

}  // namespace eudiv
