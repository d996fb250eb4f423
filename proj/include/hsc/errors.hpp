#pragma once

#include <stdexcept>
#include <string>

namespace hsc {

// Combinatorial size guard (ground sets, truncation caps).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violation on mathematical inputs.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Measure-zero phase points where the hard-sphere flow is undefined
// (simultaneous contacts).  Monte Carlo callers resample these.
struct PathologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Collision count exceeded the configured cap during an exact flow.
struct RunawayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// DSMC majorant rate was below an observed relative speed.
struct KernelBoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Histogram too coarse or too wide for the sampled support.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Importance weights degenerate: proposal does not cover the support.
struct WeightBlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hsc
