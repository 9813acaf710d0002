#pragma once

#include <stdexcept>
#include <string>

namespace qmcar {

// Input text could not be parsed; the message names the offending line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structural invariant of an input value is violated.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested dimension is unsupported or two values disagree in dimension.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point lies outside the domain an operation is defined on.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transform input maps to an infinite coordinate.
struct UnboundedImageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite-difference stencil straddles a piecewise breakpoint.
struct BreakpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Target density has zero total mass.
struct DegenerateDensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An acceptance loop consumed far more driver points than it should.
struct RunawayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sampled point violates the stated dominating-bound precondition.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sum decomposition produced an invalid (negative-mass) region.
struct DecompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A region-restricted CDF cannot be inverted.
struct InversionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A requested grid or enumeration exceeds the configured budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature ran out of panels; carries the best estimate so far.
struct AccuracyError : std::runtime_error {
    AccuracyError(const std::string& msg, double best)
        : std::runtime_error(msg), best_estimate(best) {}
    double best_estimate;
};

}  // namespace qmcar
