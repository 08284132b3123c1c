#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "vortexforge/functionals.hpp"
#include "vortexforge/report.hpp"

namespace vortex {

struct MinimizeOptions {
    double step = 1e-2;      ///< initial gradient step; Barzilai-Borwein afterwards
    int max_iters = 200000;
    double grad_tol = 1e-5;  ///< stopping norm of the constraint-tangential gradient
    bool enforce_nonneg = true;
    /// Optional hook called on every accepted iterate (pair, I, iteration);
    /// used by diagnostics such as the coercive-bound flow assertion.
    std::function<void(const VortexPair&, double, int)> observer;
};

/// True iff 0 < q1 < 2*pi*|l| and q2 > 0 — the window in which the action is
/// bounded below on the constraint set.  On failure *reason (when given)
/// names the violated bound.  Diagnostic only; never throws.
bool check_flux_window(const FluxTargets& targets, int l, std::string* reason = nullptr);

/// Exact nearest-point projection onto the flux sphere Q(A) = q_target,
/// which for the scaling-invariant flux is plain rescaling.
/// Throws DegenerateProjectionError when flux_Q(A) = 0 and
/// std::invalid_argument when q_target <= 0.
Profile project_flux(const Profile& A, double q_target);

/// Coercive lower bound for the action on the constraint set:
///   C1 \int r A1_r^2 + C2 \int A1^2/r + 1/4 \int r A2_r^2
///   + 2 l^2 \int A2^2/r - Q2/(2 pi),
/// with C1 = (1 - eps)/2 and C2 = (l^2 - Q1^2/(4 pi^2 eps))/2.  Requires
/// eps in (Q1^2/(4 pi^2 l^2), 1) so that both constants are positive;
/// throws std::invalid_argument outside that window.
double coercive_lower_bound(const VortexPair& pair, const FluxTargets& targets, double eps);

/// Rayleigh-quotient Lagrange multipliers of a (near-)stationary constrained
/// pair:  kappa = -<grad_I_1, A1>_w / (2 \int A1^2 r dr) and
/// 2 kappa + beta = -<grad_I_2, A2>_w / (2 \int A2^2 r dr).  These are the
/// unique values making grad_J vanish along the scaling directions.
/// Throws UndefinedMultiplierError when either component has zero flux.
std::pair<double, double> extract_multipliers(const VortexPair& pair);

/// Projected gradient descent for min{ I : Q(A1) = q1, Q(A2) = q2 }:
/// step along -grad_I, take nodewise absolute values (the admissible-class
/// modification; optional), rescale each component onto its flux sphere,
/// and backtrack until I is nonincreasing.  Stops when the tangential
/// gradient norm falls below opts.grad_tol.
///
/// The default seed is a tent pair scaled onto the flux spheres; pass a seed
/// to override.  Throws std::invalid_argument when the flux window fails and
/// SolverFailureError when a component collapses to zero flux mid-flow.
/// Iteration exhaustion returns converged = false (no exception), with the
/// pair still usable as a warm start.
std::pair<VortexPair, SolveReport> minimize(std::shared_ptr<const RadialGrid> grid,
                                            int l,
                                            const FluxTargets& targets,
                                            const MinimizeOptions& opts = {},
                                            const VortexPair* seed = nullptr);

/// Smooth random admissible seed (a few positive sine modes, projected onto
/// the flux spheres) for basin exploration; reproducible from rng_seed with
/// platform-independent uniforms.
VortexPair random_seed_pair(std::shared_ptr<const RadialGrid> grid, int l,
                            const FluxTargets& targets, std::uint64_t rng_seed);

} // namespace vortex
