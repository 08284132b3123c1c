#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vortexforge/functionals.hpp"
#include "vortexforge/report.hpp"

namespace vortex {

struct NewtonOptions {
    double tol = 1e-10;   ///< residual max-norm target
    int max_iters = 50;
    double damping = 1.0; ///< initial line-search factor, halved on overshoot
};

/// General banded matrix with two sub- and two superdiagonals, stored in
/// LAPACK band layout.  The linearized vortex system lands in this class:
/// interleaving the unknowns node-major as (A1_i, A2_i) puts the Laplacian
/// couplings at offset +-2 and the nonlinear cross couplings at offset +-1,
/// so the full 2n x 2n Jacobian is pentadiagonal.
class BandedSystem {
public:
    explicit BandedSystem(int size);

    int size() const { return size_; }

    /// Read/write access to entry (row, col); both 0-based.
    /// Throws std::invalid_argument outside the band |row - col| <= 2.
    double& entry(int row, int col);
    double entry(int row, int col) const;

    /// y = M x, for finite-difference validation of assembled Jacobians.
    std::vector<double> apply(std::span<const double> x) const;

    /// Solves M y = rhs by LU with partial pivoting (LAPACK dgbsv).
    /// Throws SingularSystemError on an exactly singular pivot.
    std::vector<double> solve(std::vector<double> rhs) const;

private:
    int size_;
    std::vector<double> band_; // column-major, ldab = 2*kl + ku + 1 = 7
};

/// Jacobian of the strong-form residual at the pair, node-major interleaved.
/// Row 2i is dF1_i, row 2i+1 is dF2_i; the cross-coupling diagonals are
/// dF1/dA2 = +2 A1 and dF2/dA1 = +4 A1.
BandedSystem assemble_jacobian(const VortexPair& pair);

/// Damped Newton iteration on the strong-form residual at fixed parameters.
/// The step is accepted once the residual max-norm decreases, halving the
/// factor otherwise; this monotone test cannot overshoot through a root.
/// Non-convergence within max_iters yields a report with converged = false
/// (no exception); a singular Jacobian throws SingularSystemError.
/// The report flags trivial = true when the iterate landed at (numerically)
/// the zero pair, which solves the system but carries no flux.
std::pair<VortexPair, SolveReport> refine(const VortexPair& start,
                                          const PhysicsParams& params,
                                          const NewtonOptions& opts = {});

/// refine() against the forced system F = (F1 - f1, F2 - f2); used by
/// manufactured-solution tests where (f1, f2) is the known defect of a
/// chosen smooth pair.  Empty spans mean zero forcing.
std::pair<VortexPair, SolveReport> refine_forced(const VortexPair& start,
                                                 const PhysicsParams& params,
                                                 const NewtonOptions& opts,
                                                 std::span<const double> f1,
                                                 std::span<const double> f2);

} // namespace vortex
