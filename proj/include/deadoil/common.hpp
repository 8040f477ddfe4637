// Shared error types and precondition checks.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace deadoil {

// Bad user input: rejected configs, malformed files, violated preconditions.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Runtime numerics gone wrong: nonfinite fields, failed solves.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A verification gate (gradcheck, MMS, hypotheses) did not meet tolerance.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

inline void require_numeric(bool cond, const std::string& msg) {
    if (!cond) throw NumericError(msg);
}

inline bool finite(double x) { return std::isfinite(x); }

}  // namespace deadoil
