#include "vortexforge/newton_refiner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <lapacke.h>

#include "vortexforge/errors.hpp"
#include "kernels.hpp"

namespace vortex {

namespace {

constexpr int kLower = 2;  // subdiagonals
constexpr int kUpper = 2;  // superdiagonals
constexpr int kLdab = 2 * kLower + kUpper + 1;

// Band-storage offset of entry (row, col) in the LAPACK gbsv layout
// (column-major, with kLower extra rows of pivot workspace on top).
inline std::size_t band_index(int row, int col) {
    return static_cast<std::size_t>(kLower + kUpper + row - col) +
           static_cast<std::size_t>(col) * kLdab;
}

} // namespace

BandedSystem::BandedSystem(int size)
    : size_(size), band_(static_cast<std::size_t>(kLdab) * size, 0.0) {
    if (size < 1) {
        throw std::invalid_argument("BandedSystem: size must be positive");
    }
}

double& BandedSystem::entry(int row, int col) {
    if (row < 0 || row >= size_ || col < 0 || col >= size_ || std::abs(row - col) > kUpper) {
        throw std::invalid_argument("BandedSystem: entry outside the pentadiagonal band");
    }
    return band_[band_index(row, col)];
}

double BandedSystem::entry(int row, int col) const {
    return const_cast<BandedSystem*>(this)->entry(row, col);
}

std::vector<double> BandedSystem::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != size_) {
        throw std::invalid_argument("BandedSystem::apply: dimension mismatch");
    }
    std::vector<double> y(x.size(), 0.0);
    for (int row = 0; row < size_; ++row) {
        const int lo = std::max(0, row - kLower);
        const int hi = std::min(size_ - 1, row + kUpper);
        double s = 0.0;
        for (int col = lo; col <= hi; ++col) {
            s += band_[band_index(row, col)] * x[col];
        }
        y[row] = s;
    }
    return y;
}

std::vector<double> BandedSystem::solve(std::vector<double> rhs) const {
    if (static_cast<int>(rhs.size()) != size_) {
        throw std::invalid_argument("BandedSystem::solve: dimension mismatch");
    }
    std::vector<double> ab = band_; // dgbsv factorizes in place
    std::vector<lapack_int> ipiv(size_);
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, size_, kLower, kUpper, 1,
                                          ab.data(), kLdab, ipiv.data(), rhs.data(), size_);
    if (info > 0) {
        throw SingularSystemError("banded solve: exactly singular pivot at index " +
                                  std::to_string(info));
    }
    if (info < 0) {
        throw std::invalid_argument("banded solve: illegal argument " + std::to_string(-info));
    }
    return rhs;
}

namespace {

// Fills the Jacobian of the strong-form residual at nodal values (a1, a2),
// node-major interleaved: row 2i is dF1_i, row 2i+1 is dF2_i.
void assemble_raw(const RadialGrid& g, const PhysicsParams& p,
                  std::span<const double> a1, std::span<const double> a2,
                  BandedSystem& sys) {
    const int n = g.size();
    const double h = g.spacing();
    const double invh2 = 1.0 / (h * h);
    const double l2 = static_cast<double>(p.l) * p.l;
    for (int i = 0; i < n; ++i) {
        const double r = g.node(i);
        const double invr2 = 1.0 / (r * r);
        const double off_lo = invh2 - 1.0 / (2.0 * h * r);  // coefficient of A_{i-1}
        const double off_hi = invh2 + 1.0 / (2.0 * h * r);  // coefficient of A_{i+1}
        const int p1 = 2 * i;
        const int p2 = 2 * i + 1;
        sys.entry(p1, p1) = -2.0 * invh2 - l2 * invr2 - 2.0 * (p.kappa - a2[i]);
        sys.entry(p2, p2) = -2.0 * invh2 - 4.0 * l2 * invr2 - 4.0 * (2.0 * p.kappa + p.beta);
        sys.entry(p1, p2) = 2.0 * a1[i];
        sys.entry(p2, p1) = 4.0 * a1[i];
        if (i > 0) {
            sys.entry(p1, p1 - 2) = off_lo;
            sys.entry(p2, p2 - 2) = off_lo;
        }
        if (i < n - 1) {
            sys.entry(p1, p1 + 2) = off_hi;
            sys.entry(p2, p2 + 2) = off_hi;
        }
    }
}

struct RawResidual {
    std::vector<double> f1;
    std::vector<double> f2;
    double max_abs = 0.0;
};

RawResidual eval_residual(const RadialGrid& g, const PhysicsParams& p,
                          std::span<const double> a1, std::span<const double> a2,
                          std::span<const double> force1, std::span<const double> force2) {
    RawResidual r;
    r.f1.resize(g.size());
    r.f2.resize(g.size());
    detail::residual(g, p.kappa, p.beta, p.l, a1, a2, r.f1, r.f2);
    if (!force1.empty()) {
        for (int i = 0; i < g.size(); ++i) {
            r.f1[i] -= force1[i];
        }
    }
    if (!force2.empty()) {
        for (int i = 0; i < g.size(); ++i) {
            r.f2[i] -= force2[i];
        }
    }
    r.max_abs = std::max(detail::max_abs(r.f1), detail::max_abs(r.f2));
    return r;
}

} // namespace

BandedSystem assemble_jacobian(const VortexPair& pair) {
    BandedSystem sys(2 * pair.grid().size());
    assemble_raw(pair.grid(), pair.params(), pair.a1().values(), pair.a2().values(), sys);
    return sys;
}

std::pair<VortexPair, SolveReport> refine_forced(const VortexPair& start,
                                                 const PhysicsParams& params,
                                                 const NewtonOptions& opts,
                                                 std::span<const double> f1,
                                                 std::span<const double> f2) {
    if (!(opts.tol > 0.0)) {
        throw std::invalid_argument("refine: tolerance must be positive");
    }
    const auto grid = start.grid_ptr();
    const RadialGrid& g = *grid;
    const int n = g.size();

    std::vector<double> a1(start.a1().values().begin(), start.a1().values().end());
    std::vector<double> a2(start.a2().values().begin(), start.a2().values().end());

    SolveReport rep;
    rep.kappa = params.kappa;
    rep.beta = params.beta;

    RawResidual res = eval_residual(g, params, a1, a2, f1, f2);
    BandedSystem sys(2 * n);
    std::vector<double> rhs(2 * n);
    std::vector<double> t1(n);
    std::vector<double> t2(n);

    int it = 0;
    for (; it < opts.max_iters && res.max_abs > opts.tol; ++it) {
        assemble_raw(g, params, a1, a2, sys);
        for (int i = 0; i < n; ++i) {
            rhs[2 * i] = -res.f1[i];
            rhs[2 * i + 1] = -res.f2[i];
        }
        const std::vector<double> delta = sys.solve(std::move(rhs));
        rhs.assign(2 * n, 0.0); // moved-from; reallocate for the next round

        // Halve the step until the residual max-norm strictly decreases.
        double lambda = opts.damping;
        bool accepted = false;
        RawResidual trial;
        while (lambda > 1e-12) {
            for (int i = 0; i < n; ++i) {
                t1[i] = a1[i] + lambda * delta[2 * i];
                t2[i] = a2[i] + lambda * delta[2 * i + 1];
            }
            trial = eval_residual(g, params, t1, t2, f1, f2);
            if (trial.max_abs < res.max_abs) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            rep.message = "line search stalled (residual at the roundoff floor)";
            break;
        }
        a1.swap(t1);
        a2.swap(t2);
        res = std::move(trial);
    }

    VortexPair out(Profile(grid, std::move(a1)), Profile(grid, std::move(a2)), params);
    rep.iters = it;
    rep.residual_max = res.max_abs;
    rep.converged = res.max_abs <= opts.tol;
    rep.q1 = flux_Q(out.a1());
    rep.q2 = flux_Q(out.a2());
    rep.final_I = action_I(out);
    rep.final_J = action_J(out);
    rep.trivial = total_flux(out) < 1e3 * opts.tol;
    if (rep.message.empty()) {
        rep.message = rep.converged ? "converged" : "iteration budget exhausted";
    }
    return {std::move(out), std::move(rep)};
}

std::pair<VortexPair, SolveReport> refine(const VortexPair& start,
                                          const PhysicsParams& params,
                                          const NewtonOptions& opts) {
    return refine_forced(start, params, opts, {}, {});
}

} // namespace vortex
