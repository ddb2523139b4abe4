#pragma once

#include <stdexcept>
#include <string>

namespace qlin {

// Malformed input: dimension mismatch, bad schema, out-of-range index.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A problem (or a relaxation that must be solvable) has no feasible point.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown inside the LP machinery.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ConstraintSense { LessEqual, Equal, GreaterEqual };

const char* to_string(ConstraintSense sense);
ConstraintSense sense_from_string(const std::string& text);

}
