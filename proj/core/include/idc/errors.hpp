#pragma once

#include <stdexcept>

namespace idc {

// An argument violates an operation's precondition.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A generator instance cannot emit any further IDs.
struct Exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An exact computation would exceed its enumeration budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An adversary requested more IDs than an instance can serve. This signals a
// mis-specified experiment, not a collision.
struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A demand sequence violates the single-step transition rule.
struct InvalidSequence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace idc
