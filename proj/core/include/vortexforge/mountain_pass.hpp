#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "vortexforge/functionals.hpp"
#include "vortexforge/report.hpp"

namespace vortex {

/// The two exact levels of the min-max construction: every admissible path
/// crosses the shell ||.||_H^2 = K, on which the action J is bounded below
/// by C0, so the saddle value can never fall below C0.
struct MpConstants {
    double K;  ///< norm-squared shell level, 1/(72 R^4)
    double C0; ///< action floor on the shell, 1/(864 R^4)
};

/// Computes both constants and cross-checks C0 against the closed form
/// f(K) = K/4 - sqrt(2) R^2 K^{3/2} at the maximizing K.
MpConstants mp_constants(double R);

/// Piecewise-linear peak used as the far endpoint of the search path:
/// A0(r) = (b/a) r on [0, a] and (b/a)(2a - r) on [a, 2a], with R = 2a.
struct TentParams {
    double a; ///< half-radius; the grid must satisfy R = 2a
    double b; ///< peak amplitude
};

/// Samples the tent at the grid nodes; throws std::invalid_argument unless
/// grid.R = 2a (within roundoff) and b > 0.
Profile tent_profile(std::shared_ptr<const RadialGrid> grid, const TentParams& t);

/// Doubling search for the smallest tent amplitude b such that the pair
/// (A0, A0) satisfies ||(A0,A0)||_H^2 > K and J(A0,A0) < 0 — the endpoint
/// certificate that the path must cross a positive ridge.  J(A0,A0) -> -inf
/// as b grows, so the search terminates.
std::pair<VortexPair, TentParams> choose_endpoint(const PhysicsParams& params,
                                                  std::shared_ptr<const RadialGrid> grid,
                                                  double K);

struct MpOptions {
    int path_points = 33;     ///< discretization of the path parameter; >= 16
    int deform_iters = 20000; ///< total deformation-round budget across all stages
    double descent_step = 0.4; ///< per-round point displacement cap, as a fraction
                               ///< of the mean path segment length
    double crit_tol = 1e-3;   ///< max-norm of grad_J at the path maximizer
    int stage_rounds = 400;   ///< round budget of one stage before zooming
    int stall_rounds = 12;    ///< rounds without level improvement before zooming
    int max_zooms = 40;       ///< zoom-stage recursion budget
    bool precondition = true; ///< solve (-L + l^2/r^2) d = grad for the descent direction
    int threads = 0;          ///< parallel path-point evaluation; 0 = VORTEXFORGE_THREADS or 1
};

/// One row of the per-round diagnostics: max_J is the certified ceiling of
/// the mountain-pass level (the running minimum of the sampled path maxima,
/// monotone by construction; the raw sampled maximum itself can rise when
/// re-tensioning or zooming reveals ridge detail between old sample points).
struct MpHistoryRow {
    int round;
    double max_J;
    double argmax_t;   ///< location of the path maximizer in the global parameter
    double grad_norm;  ///< max-norm of grad_J at the maximizer
};

/// Min-max search for a saddle of J at prescribed (kappa, beta): an
/// elastic-string deformation of a discrete path from (0,0) to the tent
/// endpoint.  Each round re-tensions the path to even arclength (in the
/// weighted L^2 metric) and moves every interior point a capped,
/// backtracked step along the preconditioned -grad_J.  When the level
/// stalls, the search zooms into the bracket around the maximizer and
/// recurses; a maximizer that migrates to the boundary of a zoomed bracket
/// pops back to the parent stage.
///
/// The returned pair is the path maximizer once its gradient max-norm falls
/// below crit_tol; it is a Newton seed, not a polished root.  Throws
/// std::invalid_argument when kappa <= max{0, -beta/2} or options are
/// malformed; throws PathDegenerationError when the sampled path maximum
/// drops below the certified floor C0 or the maximizer collapses into a
/// pinned endpoint.  Budget exhaustion returns converged = false.
std::pair<VortexPair, SolveReport> mp_solve(const PhysicsParams& params,
                                            std::shared_ptr<const RadialGrid> grid,
                                            const MpOptions& opts = {},
                                            std::vector<MpHistoryRow>* history = nullptr);

} // namespace vortex
