#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

/// Flux-sphere projection was requested for a profile with zero flux:
/// the zero profile has no nearest point on the sphere.
class DegenerateProjectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lagrange-multiplier extraction needs nonzero flux in each component;
/// the Rayleigh quotients are 0/0 otherwise.
class UndefinedMultiplierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The linearized system could not be factorized (exactly singular pivot).
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tail-decay fit hit nonpositive values inside the fit window, so the
/// logarithm of the squared amplitude is undefined there.
class FitUndefinedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The discrete mountain-pass path lost the ridge: its sampled maximum fell
/// below the certified floor, or the maximizer collapsed into an endpoint
/// basin with nowhere left to zoom.
class PathDegenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver failed structurally (e.g. a constrained component
/// collapsed to zero mid-flow), as opposed to merely not converging in the
/// allotted iterations, which is reported, not thrown.
class SolverFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vortex
