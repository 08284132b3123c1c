#pragma once

#include <string>

namespace vortex {

/// Common diagnostics emitted by every solver entry point.  Fields a given
/// solver cannot populate meaningfully (e.g. proj_grad_norm for the Newton
/// refiner) are left at their defaults.
struct SolveReport {
    double kappa = 0.0;          ///< wave constant: extracted (minimize) or prescribed
    double beta = 0.0;           ///< phase mismatch: extracted or prescribed
    int iters = 0;               ///< accepted iterations / deformation rounds
    double final_I = 0.0;        ///< action value at exit
    double final_J = 0.0;        ///< indefinite action value at exit
    double q1 = 0.0;             ///< achieved flux of the first component
    double q2 = 0.0;             ///< achieved flux of the second component
    double proj_grad_norm = 0.0; ///< stopping norm (tangential or path-maximizer gradient)
    double residual_max = 0.0;   ///< max-abs strong-form residual at exit
    bool converged = false;
    bool trivial = false;        ///< exit point is (numerically) the zero pair
    std::string message;
};

} // namespace vortex
