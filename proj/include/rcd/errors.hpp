#pragma once

#include <stdexcept>
#include <string>

namespace rcd {

// Thrown when an enumeration (lattice, grid, cover level) would exceed its
// configured size cap.  Callers that hit this either shrink the request or
// raise the cap deliberately; it is never a recoverable "try again" signal.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the solver when a refinement level ends up with no suspicious
// ball.  Under the problem's standing assumptions this cannot happen, so it
// indicates a violated precondition (no source in the initial ball, or an
// inconsistent time vector) rather than an internal fault.
struct EmptyCoverError : std::runtime_error {
    explicit EmptyCoverError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for geometrically degenerate inputs: dependent basis vectors,
// affinely dependent layout bases, duplicate sensors.
struct DegenerateInputError : std::invalid_argument {
    explicit DegenerateInputError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rcd
