#pragma once

#include <utility>

#include "vortexforge/radial_grid.hpp"

namespace vortex {

/// Parameters of the stationary vortex system.  kappa and beta are Lagrange
/// multipliers on the flux-constrained route and prescribed inputs on the
/// min-max route; l is the integer phase winding; R the domain radius.
///
/// Constructors accept any values — solver entry points enforce their own
/// hypotheses (l != 0, kappa > max{0, -beta/2}) where required.
struct PhysicsParams {
    double kappa = 0.0;
    double beta = 0.0;
    int l = 1;
    double R = 0.0;
};

/// True iff kappa > max{0, -beta/2}, the positivity window in which the
/// structural results (positivity, sandwich, decay) are stated.
bool kappa_window_ok(const PhysicsParams& p);

/// Prescribed fluxes for the constrained minimization route.
struct FluxTargets {
    double q1 = 0.0;
    double q2 = 0.0;
};

/// The amplitude pair (A1, A2) on one grid, together with the physics
/// parameters it is associated with.  Immutable; solvers build new pairs.
class VortexPair {
public:
    /// Throws std::invalid_argument if the profiles live on different grids
    /// or the grid radius disagrees with params.R.
    VortexPair(Profile a1, Profile a2, PhysicsParams params);

    const Profile& a1() const { return a1_; }
    const Profile& a2() const { return a2_; }
    const PhysicsParams& params() const { return params_; }
    const RadialGrid& grid() const { return a1_.grid(); }
    std::shared_ptr<const RadialGrid> grid_ptr() const { return a1_.grid_ptr(); }

    /// Same profiles under different physics parameters (used when
    /// substituting extracted multipliers into the residual).
    VortexPair with_params(const PhysicsParams& params) const;

private:
    Profile a1_;
    Profile a2_;
    PhysicsParams params_;
};

/// Energy flux 2*pi * \int A^2 r dr.
double flux_Q(const Profile& A);

/// Q(A1) + 2 Q(A2), the conserved total flux.
double total_flux(const VortexPair& pair);

/// E = \int (A1_r^2 + A2_r^2 + A1^2/r^2 + A2^2/r^2 + A1^2 A2) r dr.
double energy_E(const VortexPair& pair);

/// I = 1/2 \int (A1_r^2 + 1/2 A2_r^2 + (l^2/r^2) A1^2 + (2 l^2/r^2) A2^2
///               - 2 A1^2 A2) r dr,
/// the action whose constrained critical points solve the system with
/// (kappa, beta) appearing as multipliers.
double action_I(const VortexPair& pair);

/// J = I + kappa \int A1^2 r dr + (2 kappa + beta) \int A2^2 r dr, the free
/// action of the min-max route.  Written in this form so the relation to I
/// is an exact identity of the discretization (it is also enforced by test).
double action_J(const VortexPair& pair);

/// ||A||^2 = \int (A_r^2 + (l^2/r^2) A^2) r dr, the natural solution-space
/// norm; zero iff A == 0.
double h_norm_sq(const Profile& A, int l);

/// Product-space norm: h_norm_sq(a1) + h_norm_sq(a2) at the pair's own l.
double h_norm_sq(const VortexPair& pair);

/// Discrete L^2(r dr) gradient of I.  Assembled from the same difference
/// stencils as residual(), so that grad_J vanishes exactly where the discrete
/// strong form does:  grad_I = (-L A1 + (l^2/r^2) A1 - 2 A1 A2,
///                              -1/2 L A2 + (2 l^2/r^2) A2 - A1^2).
std::pair<Profile, Profile> grad_I(const VortexPair& pair);

/// grad_I + (2 kappa A1, 2 (2 kappa + beta) A2); equals (-F1, -1/2 F2) for
/// the strong-form residual (F1, F2).
std::pair<Profile, Profile> grad_J(const VortexPair& pair);

/// Strong-form residual of the vortex system, left minus right:
///   F1 = A1'' + A1'/r - (l^2/r^2) A1 - 2 (kappa - A2) A1
///   F2 = A2'' + A2'/r - (4 l^2/r^2) A2 - 4 (2 kappa + beta) A2 + 2 A1^2.
std::pair<Profile, Profile> residual(const VortexPair& pair);

/// Max-abs of both residual components.
double residual_max(const VortexPair& pair);

/// residual_max with the pair re-read at explicit parameters.
double residual_max(const VortexPair& pair, const PhysicsParams& params);

/// Scalar snapshot of everything above, the JSON-facing summary.
struct FunctionalValues {
    double q1 = 0.0;
    double q2 = 0.0;
    double total_flux = 0.0;
    double E = 0.0;
    double I = 0.0;
    double J = 0.0;
    double h_norm_sq_1 = 0.0;
    double h_norm_sq_2 = 0.0;
    double residual_max = 0.0;
};

FunctionalValues functional_values(const VortexPair& pair);

} // namespace vortex
