#pragma once

#include <stdexcept>
#include <string>

namespace microgrid {

// Reward baseline c_dg*(demand - pv) is non-positive, so the relative reward
// is undefined for this state.
struct DegenerateBaseline : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Storage dynamics left [0, storage_cap] by more than the tolerance.
struct SocBoundsViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Action violates at least one operating constraint for its state.
struct InfeasibleAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A state component does not lie on the discretization grid.
struct OffGridState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An action component does not lie on the discretization grid.
struct OffGridAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidBins : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyFeasibleSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spaces, table dimensions or trace do not match each other.
struct ConfigMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Brute-force enumeration would exceed its work guard.
struct InstanceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : std::runtime_error(what + " (row " + std::to_string(row) + ", column " +
                             std::to_string(column) + ")"),
          row(row),
          column(column) {}
    std::size_t row;
    std::size_t column;
};

// Trace timestamps are not consecutive hours.
struct GapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace microgrid
