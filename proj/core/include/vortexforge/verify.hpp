#pragma once

#include <optional>

#include "vortexforge/functionals.hpp"

namespace vortex {

/// Which components of a pair are numerically zero.
enum class Triviality {
    fully_nontrivial, ///< both components carry amplitude
    a1_zero,          ///< semi-trivial (0, A2) — forbidden for true solutions
    a2_zero,          ///< semi-trivial (A1, 0) — forbidden for true solutions
    trivial           ///< the zero pair
};

const char* to_string(Triviality t);

/// True iff A2 > 0 strictly at every interior node.
bool check_positivity_a2(const VortexPair& pair);

/// Classifies by comparing each component's max-abs against tol.
Triviality classify_triviality(const VortexPair& pair, double tol = 1e-8);

struct SandwichResult {
    bool ok;               ///< lo < M2 < hi, both strict with margin 1e-10
    double lo;             ///< l^2/(2 R^2) + kappa
    double hi;             ///< M1^2 / (2 l^2/R^2 + 2 (2 kappa + beta)); NaN when
                           ///< the denominator is nonpositive
    bool limit_consistent; ///< hi > lo, the necessary amplitude condition
                           ///< M1^2 > lo * (2 l^2/R^2 + 2 (2 kappa + beta))
};

/// Max-amplitude sandwich on M2 = max |A2|.  Meaningful for solution pairs
/// with kappa > max{0, -beta/2}; outside that window the upper bound can
/// degenerate and the result reports ok = false with hi = NaN.
SandwichResult check_sandwich(const VortexPair& pair);

struct DecayRates {
    double rate1;      ///< fitted decay rate of A1^2 (positive means decay)
    double intercept1;
    double rate2;      ///< fitted decay rate of A2^2
    double intercept2;
};

/// Least-squares slope of log A_m^2(r) over the tail window
/// [R (1 - window_fraction), 0.95 R].  The outermost 5% of nodes is excluded
/// because the hard cutoff A(R) = 0 steepens the numerical tail relative to
/// free-space decay.  Throws FitUndefinedError when the window contains a
/// nonpositive value and std::invalid_argument when it holds fewer than 8
/// nodes.
DecayRates fit_decay(const VortexPair& pair, double window_fraction = 0.25);

/// Aggregate verdict of the structural checks on a computed pair.
///
/// The amplitude sandwich and the exponential decay bounds are stated only
/// under kappa > max{0, -beta/2}; when that window fails, those checks are
/// reported with applicable = false and excluded from all_pass, which is the
/// conjunction of every check whose hypothesis holds.
struct VerifyReport {
    bool kappa_window = false; ///< kappa > max{0, -beta/2}
    bool positive_a2 = false;
    Triviality semi_trivial = Triviality::trivial;
    double m1 = 0.0;  ///< max |A1|
    double m2 = 0.0;  ///< max |A2|
    double sandwich_lo = 0.0;
    double sandwich_hi = 0.0;
    bool sandwich_ok = false;
    bool sandwich_applicable = false;
    double decay_rate_a1 = 0.0;
    double decay_rate_a2 = 0.0;
    double decay_intercept_a1 = 0.0;
    double decay_intercept_a2 = 0.0;
    double decay_bound_a1 = 0.0;       ///< sqrt(2 kappa)
    double decay_bound_a2_stmt = 0.0;  ///< sqrt(2 kappa + beta), the stated rate
    double decay_bound_a2_proof = 0.0; ///< 2 sqrt(2 kappa + beta), the comparison-
                                       ///< function rate; reported, not adjudicated
    bool decay_a1_ok = false;
    bool decay_a2_stmt_ok = false;
    bool decay_a2_proof_ok = false;
    bool decay_fit_ok = false;
    bool decay_applicable = false;
    double flux_q1 = 0.0;
    double flux_q2 = 0.0;
    bool flux_checked = false;
    bool flux_ok = false;
    bool all_pass = false;
};

/// Runs every check above; recomputes fluxes against targets when given
/// (relative tolerance 1e-10).  A failed decay fit is reported as a failed
/// check, never rethrown.
VerifyReport verify_all(const VortexPair& pair,
                        const std::optional<FluxTargets>& targets = std::nullopt,
                        double triviality_tol = 1e-8);

} // namespace vortex
