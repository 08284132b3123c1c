#include "vortexforge/mountain_pass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "vortexforge/errors.hpp"
#include "kernels.hpp"

namespace vortex {

namespace {

int resolve_threads(int requested) {
    int t = requested;
    if (t <= 0) {
        if (const char* env = std::getenv("VORTEXFORGE_THREADS")) {
            t = std::atoi(env);
        }
    }
    if (t <= 0) {
        t = 1;
    }
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw > 0) {
        t = std::min(t, hw);
    }
    return t;
}

// Deterministic data-parallel loop: contiguous chunks, slot writes only.
void parallel_for(int begin, int end, int threads, const std::function<void(int)>& body) {
    const int count = end - begin;
    if (count <= 0) {
        return;
    }
    if (threads <= 1 || count == 1) {
        for (int i = begin; i < end; ++i) {
            body(i);
        }
        return;
    }
    const int workers = std::min(threads, count);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run_chunk = [&](int w) {
        const int lo = begin + static_cast<int>(static_cast<long long>(count) * w / workers);
        const int hi = begin + static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
        try {
            for (int i = lo; i < hi; ++i) {
                body(i);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
                first_error = std::current_exception();
            }
        }
    };
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(run_chunk, w);
    }
    run_chunk(0);
    for (std::thread& th : pool) {
        th.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

// A path point is the concatenated pair (a1 | a2), length 2n.
using Point = std::vector<double>;

} // namespace

MpConstants mp_constants(double R) {
    if (!(R > 0.0)) {
        throw std::invalid_argument("mp_constants: R must be positive");
    }
    const double R4 = R * R * R * R;
    MpConstants c{1.0 / (72.0 * R4), 1.0 / (864.0 * R4)};
    // C0 is the maximum of f(K) = K/4 - sqrt(2) R^2 K^{3/2}; the closed forms
    // agree identically, so any drift here means the formulas were edited
    // inconsistently.
    const double f = c.K / 4.0 - std::sqrt(2.0) * R * R * std::pow(c.K, 1.5);
    if (std::abs(f - c.C0) > 1e-12 * c.C0) {
        throw std::logic_error("mp_constants: closed forms for K and C0 disagree");
    }
    return c;
}

Profile tent_profile(std::shared_ptr<const RadialGrid> grid, const TentParams& t) {
    const RadialGrid& g = *grid;
    if (!(t.a > 0.0) || !(t.b > 0.0)) {
        throw std::invalid_argument("tent_profile: a and b must be positive");
    }
    if (std::abs(g.radius() - 2.0 * t.a) > 1e-12 * g.radius()) {
        throw std::invalid_argument("tent_profile: grid radius must equal 2a");
    }
    const double slope = t.b / t.a;
    std::vector<double> v(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        v[i] = (r <= t.a) ? slope * r : slope * (2.0 * t.a - r);
    }
    return Profile(std::move(grid), std::move(v));
}

std::pair<VortexPair, TentParams> choose_endpoint(const PhysicsParams& params,
                                                  std::shared_ptr<const RadialGrid> grid,
                                                  double K) {
    if (params.l == 0) {
        throw std::invalid_argument("choose_endpoint: vortex number must be nonzero");
    }
    if (!kappa_window_ok(params)) {
        throw std::invalid_argument("choose_endpoint: requires kappa > max{0, -beta/2}");
    }
    const double a = grid->radius() / 2.0;
    for (double b = 1.0; b <= 0x1p40; b *= 2.0) {
        const Profile tent = tent_profile(grid, TentParams{a, b});
        VortexPair pair(tent, tent, params);
        if (h_norm_sq(pair) > K && action_J(pair) < 0.0) {
            return {std::move(pair), TentParams{a, b}};
        }
    }
    // Unreachable: J(A0,A0) is a cubic in b with negative leading coefficient.
    throw std::logic_error("choose_endpoint: doubling search failed to certify an endpoint");
}

namespace {

struct PathStage {
    std::vector<Point> pts;
    std::vector<double> ts; ///< global path parameter of each point
};

double pair_norm_sq(const RadialGrid& g, std::span<const double> u) {
    const int n = g.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        s += g.weight(i) * (u[i] * u[i] + u[n + i] * u[n + i]);
    }
    return s;
}

double chord_length(const RadialGrid& g, const Point& x, const Point& y) {
    const int n = g.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d1 = x[i] - y[i];
        const double d2 = x[n + i] - y[n + i];
        s += g.weight(i) * (d1 * d1 + d2 * d2);
    }
    return std::sqrt(s);
}

// Resamples a polyline to m points at even arclength in the weighted metric,
// keeping the endpoints; also interpolates the global parameter values.
PathStage respace_to(const RadialGrid& g, const PathStage& in, int m) {
    const int k_in = static_cast<int>(in.pts.size());
    std::vector<double> cum(k_in, 0.0);
    for (int k = 1; k < k_in; ++k) {
        cum[k] = cum[k - 1] + chord_length(g, in.pts[k], in.pts[k - 1]);
    }
    const double total = cum.back();
    if (!(total > 0.0)) {
        throw PathDegenerationError("path re-tension: polyline has collapsed to a point");
    }
    PathStage out;
    out.pts.resize(m);
    out.ts.resize(m);
    out.pts.front() = in.pts.front();
    out.pts.back() = in.pts.back();
    out.ts.front() = in.ts.front();
    out.ts.back() = in.ts.back();
    const std::size_t dim = in.pts.front().size();
    int seg = 0;
    for (int j = 1; j < m - 1; ++j) {
        const double target = total * j / (m - 1);
        while (seg < k_in - 2 && cum[seg + 1] < target) {
            ++seg;
        }
        const double span = cum[seg + 1] - cum[seg];
        const double theta = (span > 0.0) ? (target - cum[seg]) / span : 0.0;
        Point& p = out.pts[j];
        p.resize(dim);
        const Point& lo = in.pts[seg];
        const Point& hi = in.pts[seg + 1];
        for (std::size_t i = 0; i < dim; ++i) {
            p[i] = (1.0 - theta) * lo[i] + theta * hi[i];
        }
        out.ts[j] = (1.0 - theta) * in.ts[seg] + theta * in.ts[seg + 1];
    }
    return out;
}

// Thomas solve of (-L + l^2/r^2) d = rhs, the single-component metric
// operator of the solution space; strictly diagonally dominant, no pivoting
// needed.  Used to precondition the descent so step sizes stay
// mesh-independent.
void precond_solve(const RadialGrid& g, double l2, std::span<const double> rhs,
                   std::span<double> d, std::vector<double>& cw, std::vector<double>& dw) {
    const int n = g.size();
    const double h = g.spacing();
    const double invh2 = 1.0 / (h * h);
    cw.resize(n);
    dw.resize(n);
    double diag0 = 2.0 * invh2 + l2 / (g.node(0) * g.node(0));
    cw[0] = -(invh2 + 1.0 / (2.0 * h * g.node(0))) / diag0;
    dw[0] = rhs[0] / diag0;
    for (int i = 1; i < n; ++i) {
        const double r = g.node(i);
        const double lower = -(invh2 - 1.0 / (2.0 * h * r));
        const double diag = 2.0 * invh2 + l2 / (r * r);
        const double upper = -(invh2 + 1.0 / (2.0 * h * r));
        const double denom = diag - lower * cw[i - 1];
        cw[i] = upper / denom;
        dw[i] = (rhs[i] - lower * dw[i - 1]) / denom;
    }
    d[n - 1] = dw[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        d[i] = dw[i] - cw[i] * d[i + 1];
    }
}

struct DescentScratch {
    std::vector<double> g1, g2, d, trial, cw, dw;
};

} // namespace

std::pair<VortexPair, SolveReport> mp_solve(const PhysicsParams& params,
                                            std::shared_ptr<const RadialGrid> grid,
                                            const MpOptions& opts,
                                            std::vector<MpHistoryRow>* history) {
    if (params.l == 0) {
        throw std::invalid_argument("mp_solve: vortex number must be nonzero");
    }
    if (!kappa_window_ok(params)) {
        throw std::invalid_argument("mp_solve: requires kappa > max{0, -beta/2}");
    }
    if (opts.path_points < 16) {
        throw std::invalid_argument("mp_solve: need at least 16 path points");
    }
    if (!(opts.descent_step > 0.0) || !(opts.crit_tol > 0.0)) {
        throw std::invalid_argument("mp_solve: descent_step and crit_tol must be positive");
    }

    const RadialGrid& g = *grid;
    const int n = g.size();
    const int m = opts.path_points;
    const int threads = resolve_threads(opts.threads);
    const double l2 = static_cast<double>(params.l) * params.l;
    const MpConstants consts = mp_constants(g.radius());

    auto [endpoint, tent] = choose_endpoint(params, grid, consts.K);
    (void)tent;

    Point far(2 * n);
    for (int i = 0; i < n; ++i) {
        far[i] = endpoint.a1()[i];
        far[n + i] = endpoint.a2()[i];
    }

    // Initial path: the linear homotopy t -> t * (A0, A0).
    PathStage cur;
    cur.pts.resize(m, Point(2 * n));
    cur.ts.resize(m);
    for (int j = 0; j < m; ++j) {
        const double t = static_cast<double>(j) / (m - 1);
        cur.ts[j] = t;
        for (int i = 0; i < 2 * n; ++i) {
            cur.pts[j][i] = t * far[i];
        }
    }

    std::vector<PathStage> parents; // zoom stack

    auto eval_J = [&](const Point& p) {
        return detail::action_J(g, params.kappa, params.beta, params.l,
                                std::span<const double>(p.data(), n),
                                std::span<const double>(p.data() + n, n));
    };

    std::vector<double> J(m);
    // One scratch block per path point: the descent sweep runs the points in
    // parallel, and private buffers keep it free of shared mutable state.
    std::vector<DescentScratch> scratch(m);

    SolveReport rep;
    rep.kappa = params.kappa;
    rep.beta = params.beta;

    double level = std::numeric_limits<double>::infinity(); // certified ceiling
    double stage_best = std::numeric_limits<double>::infinity();
    int since_improve = 0;
    int rounds_in_stage = 0;
    int round = 0;
    int best_k = -1;
    double best_gn = std::numeric_limits<double>::infinity();
    bool found = false;

    auto reset_stage_stats = [&] {
        stage_best = std::numeric_limits<double>::infinity();
        since_improve = 0;
        rounds_in_stage = 0;
    };

    while (round < opts.deform_iters) {
        cur = respace_to(g, cur, m);

        parallel_for(0, m, threads, [&](int j) { J[j] = eval_J(cur.pts[j]); });
        int ks = 0;
        for (int j = 1; j < m; ++j) {
            if (J[j] > J[ks]) {
                ks = j;
            }
        }

        // Every admissible path crosses the shell where J >= C0, so the
        // sampled maximum can only fall below that floor if the discrete
        // path has slipped off the ridge.
        if (J[ks] < consts.C0 - 1e-9) {
            throw PathDegenerationError("mp_solve: path maximum fell below the certified floor");
        }
        level = std::min(level, J[ks]);

        if (ks == 0 || ks == m - 1) {
            // The ridge left this bracket.  In a zoomed stage, widen back to
            // the parent; at the top level the maximizer collapsed into a
            // pinned endpoint and the search cannot continue.
            if (parents.empty()) {
                throw PathDegenerationError("mp_solve: path maximizer collapsed into an endpoint");
            }
            cur = std::move(parents.back());
            parents.pop_back();
            reset_stage_stats();
            continue;
        }

        // Gradient max-norm at the maximizer decides convergence.
        DescentScratch& s0 = scratch[0];
        s0.g1.resize(n);
        s0.g2.resize(n);
        const Point& top = cur.pts[ks];
        detail::grad_J(g, params.kappa, params.beta, params.l,
                       std::span<const double>(top.data(), n),
                       std::span<const double>(top.data() + n, n), s0.g1, s0.g2);
        const double gn = std::max(detail::max_abs(s0.g1), detail::max_abs(s0.g2));
        best_k = ks;
        best_gn = gn;
        if (history) {
            history->push_back(MpHistoryRow{round, level, cur.ts[ks], gn});
        }
        if (gn <= opts.crit_tol) {
            found = true;
            break;
        }

        // Stall bookkeeping precedes the sweep so a stage that has stopped
        // making progress zooms before burning its full round budget.
        if (stage_best - J[ks] > 1e-12 * std::max(1.0, std::abs(stage_best))) {
            stage_best = J[ks];
            since_improve = 0;
        } else {
            ++since_improve;
        }
        if (since_improve >= opts.stall_rounds || rounds_in_stage >= opts.stage_rounds) {
            if (static_cast<int>(parents.size()) >= opts.max_zooms) {
                rep.message = "zoom budget exhausted";
                break;
            }
            PathStage bracket;
            bracket.pts = {cur.pts[ks - 1], cur.pts[ks], cur.pts[ks + 1]};
            bracket.ts = {cur.ts[ks - 1], cur.ts[ks], cur.ts[ks + 1]};
            parents.push_back(std::move(cur));
            cur = respace_to(g, bracket, m);
            reset_stage_stats();
            continue;
        }

        // Descent sweep: move every interior point a capped, backtracked
        // step along the preconditioned -grad_J.  Points are independent
        // within a round (slot writes), so the sweep parallelizes
        // deterministically.
        double length = 0.0;
        for (int j = 1; j < m; ++j) {
            length += chord_length(g, cur.pts[j], cur.pts[j - 1]);
        }
        const double cap = opts.descent_step * length / (m - 1);

        parallel_for(1, m - 1, threads, [&](int j) {
            DescentScratch& sc = scratch[j];
            sc.g1.resize(n);
            sc.g2.resize(n);
            sc.d.resize(2 * n);
            sc.trial.resize(2 * n);
            Point& p = cur.pts[j];
            detail::grad_J(g, params.kappa, params.beta, params.l,
                           std::span<const double>(p.data(), n),
                           std::span<const double>(p.data() + n, n), sc.g1, sc.g2);
            if (opts.precondition) {
                precond_solve(g, l2, sc.g1, std::span<double>(sc.d.data(), n), sc.cw, sc.dw);
                precond_solve(g, l2, sc.g2, std::span<double>(sc.d.data() + n, n), sc.cw, sc.dw);
            } else {
                std::copy(sc.g1.begin(), sc.g1.end(), sc.d.begin());
                std::copy(sc.g2.begin(), sc.g2.end(), sc.d.begin() + n);
            }
            // Directional slope <grad, d>_w; positive since the
            // preconditioner is positive definite.
            double slope = 0.0;
            for (int i = 0; i < n; ++i) {
                slope += g.weight(i) * (sc.g1[i] * sc.d[i] + sc.g2[i] * sc.d[n + i]);
            }
            if (!(slope > 0.0)) {
                return; // gradient numerically zero at this point
            }
            const double dnorm = std::sqrt(pair_norm_sq(g, sc.d));
            if (!(dnorm > 0.0)) {
                return;
            }
            // The cap keeps any single point from tunneling across the
            // ridge in one round, which would sever the path.
            double step = std::min(1.0, cap / dnorm);
            const double J0 = J[j];
            for (int bt = 0; bt < 40; ++bt) {
                for (int i = 0; i < 2 * n; ++i) {
                    sc.trial[i] = p[i] - step * sc.d[i];
                }
                const double Jt = eval_J(sc.trial);
                if (Jt <= J0 - 1e-4 * step * slope) {
                    std::copy(sc.trial.begin(), sc.trial.end(), p.begin());
                    return;
                }
                step *= 0.5;
            }
            // No acceptable step: leave the point to the next re-tension.
        });

        ++round;
        ++rounds_in_stage;
    }

    if (best_k < 0) {
        throw PathDegenerationError("mp_solve: no deformation round completed");
    }

    const Point& result = cur.pts[best_k];
    VortexPair out(
        Profile(grid, std::vector<double>(result.begin(), result.begin() + n)),
        Profile(grid, std::vector<double>(result.begin() + n, result.end())), params);

    rep.iters = round;
    rep.final_I = action_I(out);
    rep.final_J = action_J(out);
    rep.q1 = flux_Q(out.a1());
    rep.q2 = flux_Q(out.a2());
    rep.proj_grad_norm = best_gn;
    rep.residual_max = residual_max(out);
    rep.converged = found;
    rep.trivial = total_flux(out) < 1e-10;

    const double max1 = detail::max_abs(out.a1().values());
    const double max2 = detail::max_abs(out.a2().values());
    if (found && (max1 <= 10.0 * opts.crit_tol || max2 <= 10.0 * opts.crit_tol)) {
        rep.converged = false;
        rep.message = "saddle candidate looks semi-trivial; rejected";
    } else if (rep.message.empty()) {
        rep.message = found ? "converged" : "deformation budget exhausted";
    }
    return {std::move(out), std::move(rep)};
}

} // namespace vortex
