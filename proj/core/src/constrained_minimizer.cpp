#include "vortexforge/constrained_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "vortexforge/errors.hpp"
#include "vortexforge/mountain_pass.hpp"
#include "kernels.hpp"

namespace vortex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Scales raw nodal values onto the flux sphere in place.
void project_raw(const RadialGrid& g, std::vector<double>& x, double q_target) {
    const double q = detail::flux(g, x);
    if (q <= 0.0) {
        throw DegenerateProjectionError("flux projection: profile has zero flux");
    }
    const double c = std::sqrt(q_target / q);
    for (double& v : x) {
        v *= c;
    }
}

// Platform-independent uniform in [0, 1): the distribution classes in
// <random> are implementation-defined, which would break byte-identical
// reproducibility across toolchains.
double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

} // namespace

bool check_flux_window(const FluxTargets& targets, int l, std::string* reason) {
    const double cap = kTwoPi * std::abs(l);
    if (!(targets.q1 > 0.0)) {
        if (reason) {
            *reason = "q1 must be positive";
        }
        return false;
    }
    if (!(targets.q1 < cap)) {
        if (reason) {
            std::ostringstream os;
            os << "q1 = " << targets.q1 << " must lie strictly below 2*pi*|l| = " << cap
               << " (coercivity window)";
            *reason = os.str();
        }
        return false;
    }
    if (!(targets.q2 > 0.0)) {
        if (reason) {
            *reason = "q2 must be positive";
        }
        return false;
    }
    if (reason) {
        reason->clear();
    }
    return true;
}

Profile project_flux(const Profile& A, double q_target) {
    if (!(q_target > 0.0)) {
        throw std::invalid_argument("flux projection: target must be positive");
    }
    std::vector<double> x(A.values().begin(), A.values().end());
    project_raw(A.grid(), x, q_target);
    return A.with_values(std::move(x));
}

double coercive_lower_bound(const VortexPair& pair, const FluxTargets& targets, double eps) {
    const int l = pair.params().l;
    const double l2 = static_cast<double>(l) * l;
    const double eps_lo = targets.q1 * targets.q1 / (4.0 * std::numbers::pi * std::numbers::pi * l2);
    if (!(eps > eps_lo) || !(eps < 1.0)) {
        std::ostringstream os;
        os << "coercive bound: eps = " << eps << " outside the admissible window (" << eps_lo
           << ", 1)";
        throw std::invalid_argument(os.str());
    }
    const double c1 = 0.5 * (1.0 - eps);
    const double c2 = 0.5 * (l2 - targets.q1 * targets.q1 /
                                      (4.0 * std::numbers::pi * std::numbers::pi * eps));
    const RadialGrid& g = pair.grid();
    std::span<const double> a1 = pair.a1().values();
    std::span<const double> a2 = pair.a2().values();
    double sing1 = 0.0; // \int A1^2 / r dr
    double sing2 = 0.0; // \int A2^2 / r dr
    for (int i = 0; i < g.size(); ++i) {
        const double invr2 = 1.0 / (g.node(i) * g.node(i));
        sing1 += g.weight(i) * a1[i] * a1[i] * invr2;
        sing2 += g.weight(i) * a2[i] * a2[i] * invr2;
    }
    return c1 * detail::deriv_energy(g, a1) + c2 * sing1 +
           0.25 * detail::deriv_energy(g, a2) + 2.0 * l2 * sing2 - targets.q2 / kTwoPi;
}

std::pair<double, double> extract_multipliers(const VortexPair& pair) {
    const RadialGrid& g = pair.grid();
    std::span<const double> a1 = pair.a1().values();
    std::span<const double> a2 = pair.a2().values();
    const double m1 = detail::wdot(g, a1, a1);
    const double m2 = detail::wdot(g, a2, a2);
    if (m1 <= 0.0 || m2 <= 0.0) {
        throw UndefinedMultiplierError(
            "multiplier extraction: both components need nonzero flux");
    }
    std::vector<double> g1(g.size());
    std::vector<double> g2(g.size());
    detail::grad_I(g, pair.params().l, a1, a2, g1, g2);
    const double kappa = -detail::wdot(g, g1, a1) / (2.0 * m1);
    const double two_kappa_beta = -detail::wdot(g, g2, a2) / (2.0 * m2);
    return {kappa, two_kappa_beta - 2.0 * kappa};
}

VortexPair random_seed_pair(std::shared_ptr<const RadialGrid> grid, int l,
                            const FluxTargets& targets, std::uint64_t rng_seed) {
    std::mt19937_64 eng(rng_seed);
    const RadialGrid& g = *grid;
    const int n = g.size();
    std::vector<std::vector<double>> comp(2, std::vector<double>(n));
    for (auto& x : comp) {
        double c[4];
        for (double& ck : c) {
            ck = 0.25 + uniform01(eng);
        }
        for (int i = 0; i < n; ++i) {
            const double u = std::numbers::pi * g.node(i) / g.radius();
            double s = 0.0;
            for (int k = 0; k < 4; ++k) {
                s += c[k] * std::sin((k + 1) * u) / (k + 1);
            }
            // Keep a positive first-mode floor so the profile cannot vanish.
            x[i] = std::abs(s) + 0.2 * c[0] * std::sin(u);
        }
    }
    project_raw(g, comp[0], targets.q1);
    project_raw(g, comp[1], targets.q2);
    PhysicsParams p{0.0, 0.0, l, g.radius()};
    return VortexPair(Profile(grid, std::move(comp[0])), Profile(grid, std::move(comp[1])), p);
}

std::pair<VortexPair, SolveReport> minimize(std::shared_ptr<const RadialGrid> grid,
                                            int l,
                                            const FluxTargets& targets,
                                            const MinimizeOptions& opts,
                                            const VortexPair* seed) {
    if (l == 0) {
        throw std::invalid_argument("minimize: vortex number must be nonzero");
    }
    if (!(opts.step > 0.0) || !(opts.grad_tol > 0.0)) {
        throw std::invalid_argument("minimize: step and grad_tol must be positive");
    }
    std::string reason;
    if (!check_flux_window(targets, l, &reason)) {
        throw std::invalid_argument("minimize: flux window violated: " + reason);
    }

    const RadialGrid& g = *grid;
    const int n = g.size();
    const PhysicsParams run_params{0.0, 0.0, l, g.radius()};

    std::vector<double> x1;
    std::vector<double> x2;
    if (seed) {
        if (seed->grid_ptr().get() != grid.get() &&
            (seed->grid().size() != n || seed->grid().radius() != g.radius())) {
            throw std::invalid_argument("minimize: seed lives on an incompatible grid");
        }
        x1.assign(seed->a1().values().begin(), seed->a1().values().end());
        x2.assign(seed->a2().values().begin(), seed->a2().values().end());
    } else {
        const Profile tent = tent_profile(grid, TentParams{g.radius() / 2.0, 1.0});
        x1.assign(tent.values().begin(), tent.values().end());
        x2 = x1;
    }

    try {
        project_raw(g, x1, targets.q1);
        project_raw(g, x2, targets.q2);
    } catch (const DegenerateProjectionError&) {
        throw SolverFailureError("minimize: seed component has zero flux");
    }

    std::vector<double> g1(n);
    std::vector<double> g2(n);
    std::vector<double> y1(n);
    std::vector<double> y2(n);
    std::vector<double> px1;
    std::vector<double> px2;
    std::vector<double> pg1;
    std::vector<double> pg2;

    auto make_pair_at = [&](const std::vector<double>& a,
                            const std::vector<double>& b) -> VortexPair {
        return VortexPair(Profile(grid, a), Profile(grid, b), run_params);
    };

    double I_cur = detail::action_I(g, l, x1, x2);
    double s = opts.step;
    double gtn = 0.0;
    bool converged = false;
    bool stalled = false;
    int it = 0;

    for (; it < opts.max_iters; ++it) {
        detail::grad_I(g, l, x1, x2, g1, g2);

        // Tangential part: remove the components along the scaling
        // directions A1 and A2, which the sphere projections absorb.
        const double c1 = detail::wdot(g, g1, x1) / detail::wdot(g, x1, x1);
        const double c2 = detail::wdot(g, g2, x2) / detail::wdot(g, x2, x2);
        double t2sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t1 = g1[i] - c1 * x1[i];
            const double t2 = g2[i] - c2 * x2[i];
            t2sum += g.weight(i) * (t1 * t1 + t2 * t2);
        }
        gtn = std::sqrt(t2sum);
        if (gtn <= opts.grad_tol) {
            converged = true;
            break;
        }

        // Barzilai-Borwein step from the last accepted move.
        if (!px1.empty()) {
            double num = 0.0;
            double den = 0.0;
            for (int i = 0; i < n; ++i) {
                const double dx1 = x1[i] - px1[i];
                const double dx2 = x2[i] - px2[i];
                const double dg1 = g1[i] - pg1[i];
                const double dg2 = g2[i] - pg2[i];
                num += g.weight(i) * (dx1 * dx1 + dx2 * dx2);
                den += g.weight(i) * (dx1 * dg1 + dx2 * dg2);
            }
            if (den > 0.0 && num > 0.0) {
                s = std::clamp(num / den, 1e-12, 1e3);
            }
        }

        // Backtracked projected step, monotone in I.
        double I_new = I_cur;
        bool accepted = false;
        while (s > 1e-14) {
            for (int i = 0; i < n; ++i) {
                double v1 = x1[i] - s * g1[i];
                double v2 = x2[i] - s * g2[i];
                if (opts.enforce_nonneg) {
                    v1 = std::abs(v1);
                    v2 = std::abs(v2);
                }
                y1[i] = v1;
                y2[i] = v2;
            }
            try {
                project_raw(g, y1, targets.q1);
                project_raw(g, y2, targets.q2);
            } catch (const DegenerateProjectionError&) {
                throw SolverFailureError("minimize: component collapsed to zero flux mid-flow");
            }
            I_new = detail::action_I(g, l, y1, y2);
            if (I_new <= I_cur) {
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            stalled = true;
            break;
        }

        px1 = x1;
        px2 = x2;
        pg1 = g1;
        pg2 = g2;
        x1.swap(y1);
        x2.swap(y2);
        I_cur = I_new;
        if (opts.observer) {
            opts.observer(make_pair_at(x1, x2), I_cur, it);
        }
    }

    // A stall at the roundoff floor of I with a nearly-converged gradient is
    // still a usable stationary point; anything else is a genuine failure.
    if (stalled && gtn <= 100.0 * opts.grad_tol) {
        converged = true;
    }

    VortexPair at_flow(make_pair_at(x1, x2));
    const auto [kappa, beta] = extract_multipliers(at_flow);
    const PhysicsParams solved{kappa, beta, l, g.radius()};
    VortexPair out = at_flow.with_params(solved);

    SolveReport rep;
    rep.kappa = kappa;
    rep.beta = beta;
    rep.iters = it;
    rep.final_I = I_cur;
    rep.final_J = action_J(out);
    rep.q1 = flux_Q(out.a1());
    rep.q2 = flux_Q(out.a2());
    rep.proj_grad_norm = gtn;
    rep.residual_max = residual_max(out);
    rep.converged = converged;
    rep.trivial = false;
    if (converged && stalled) {
        rep.message = "converged (step collapsed at the roundoff floor of I)";
    } else if (converged) {
        rep.message = "converged";
    } else if (stalled) {
        rep.message = "stalled before reaching the gradient tolerance";
    } else {
        rep.message = "iteration budget exhausted";
    }

    const double min1 = *std::min_element(x1.begin(), x1.end());
    const double min2 = *std::min_element(x2.begin(), x2.end());
    if (converged && (min1 <= 0.0 || min2 <= 0.0)) {
        rep.message += "; warning: nonpositive interior node at exit";
    }
    return {std::move(out), std::move(rep)};
}

} // namespace vortex
