#pragma once

#include <stdexcept>
#include <string>

namespace llsamp {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A required parameter inequality does not hold; the message names the
// failed inequality with its numeric values.
struct ConditionViolatedError : Error {
    using Error::Error;
};

// The constraint family has no closed-form conditional violation
// probability; callers must use the Monte-Carlo frozen path.
struct NotClosedFormError : Error {
    using Error::Error;
};

// A configured draw/trial budget was reached. Signals a degenerate input
// or a violated precondition, never a silent truncation.
struct BudgetExceededError : Error {
    using Error::Error;
};

// MarginOverflow recursion path exceeded the configured guard.
struct RecursionGuardError : BudgetExceededError {
    using BudgetExceededError::BudgetExceededError;
};

// A rejection-sampling component admits no satisfying assignment.
struct InfeasibleComponentError : Error {
    using Error::Error;
};

// Brute-force enumeration space exceeds the configured cap.
struct TooLargeError : Error {
    using Error::Error;
};

// Malformed instance file or inconsistent formula description.
struct ParseError : Error {
    using Error::Error;
};

// The final full-assignment verification failed; indicates an
// implementation bug, never expected in-regime.
struct UnsatisfiableError : Error {
    using Error::Error;
};

}  // namespace llsamp
