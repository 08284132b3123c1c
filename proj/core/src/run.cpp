#include "vortexforge/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexforge/constrained_minimizer.hpp"
#include "vortexforge/errors.hpp"
#include "vortexforge/functionals.hpp"
#include "vortexforge/mountain_pass.hpp"
#include "vortexforge/newton_refiner.hpp"
#include "vortexforge/pair_io.hpp"
#include "vortexforge/verify.hpp"

namespace vortex {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

const char* const kKnownKeys[] = {
    "mode", "R", "n", "l", "kappa", "beta", "q1", "q2", "out", "seed_file", "rng_seed",
    "min.step", "min.max_iters", "min.grad_tol", "min.enforce_nonneg", "min.seed",
    "newton.tol", "newton.max_iters", "newton.damping",
    "mp.path_points", "mp.deform_iters", "mp.descent_step", "mp.crit_tol",
    "mp.stage_rounds", "mp.stall_rounds", "mp.max_zooms", "mp.precondition", "mp.threads",
    "verify.window", "verify.tol",
    "sweep.param", "sweep.from", "sweep.to", "sweep.step", "sweep.mode",
    "quad.b",
};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) {
            return true;
        }
    }
    return false;
}

} // namespace

RunConfig RunConfig::from_text(std::string_view text) {
    RunConfig cfg;
    int lineno = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        }
        if (!known_key(key)) {
            std::cerr << "config: unknown key '" << key << "' ignored\n";
            continue;
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read config file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

bool RunConfig::has(const std::string& key) const {
    return values_.count(key) != 0;
}

void RunConfig::set(const std::string& key, std::string value) {
    values_[key] = std::move(value);
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::require_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) {
        throw std::invalid_argument("config: missing required key '" + key + "'");
    }
    return it->second;
}

double RunConfig::require_double(const std::string& key) const {
    const std::string raw = require_string(key);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != raw.size() || !std::isfinite(v)) {
        throw std::invalid_argument("config: key '" + key + "' is not a finite number: '" +
                                    raw + "'");
    }
    return v;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? require_double(key) : fallback;
}

int RunConfig::require_int(const std::string& key) const {
    const double v = require_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw std::invalid_argument("config: key '" + key + "' must be an integer");
    }
    return i;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    return has(key) ? require_int(key) : fallback;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) {
        return fallback;
    }
    const std::string raw = get_string(key, "");
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") {
        return true;
    }
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") {
        return false;
    }
    throw std::invalid_argument("config: key '" + key + "' is not a boolean: '" + raw + "'");
}

namespace {

NewtonOptions newton_options(const RunConfig& cfg) {
    NewtonOptions o;
    o.tol = cfg.get_double("newton.tol", o.tol);
    o.max_iters = cfg.get_int("newton.max_iters", o.max_iters);
    o.damping = cfg.get_double("newton.damping", o.damping);
    return o;
}

MinimizeOptions minimize_options(const RunConfig& cfg) {
    MinimizeOptions o;
    o.step = cfg.get_double("min.step", o.step);
    o.max_iters = cfg.get_int("min.max_iters", o.max_iters);
    o.grad_tol = cfg.get_double("min.grad_tol", o.grad_tol);
    o.enforce_nonneg = cfg.get_bool("min.enforce_nonneg", o.enforce_nonneg);
    return o;
}

MpOptions mp_options(const RunConfig& cfg) {
    MpOptions o;
    o.path_points = cfg.get_int("mp.path_points", o.path_points);
    o.deform_iters = cfg.get_int("mp.deform_iters", o.deform_iters);
    o.descent_step = cfg.get_double("mp.descent_step", o.descent_step);
    o.crit_tol = cfg.get_double("mp.crit_tol", o.crit_tol);
    o.stage_rounds = cfg.get_int("mp.stage_rounds", o.stage_rounds);
    o.stall_rounds = cfg.get_int("mp.stall_rounds", o.stall_rounds);
    o.max_zooms = cfg.get_int("mp.max_zooms", o.max_zooms);
    o.precondition = cfg.get_bool("mp.precondition", o.precondition);
    o.threads = cfg.get_int("mp.threads", o.threads);
    return o;
}

std::uint64_t rng_seed_of(const RunConfig& cfg) {
    const std::string raw = cfg.get_string("rng_seed", "0");
    try {
        return std::stoull(raw);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: rng_seed is not an unsigned integer: '" + raw + "'");
    }
}

void print_verify_line(const char* name, bool applicable, bool ok) {
    std::printf("  %-28s %s\n", name, !applicable ? "n/a" : (ok ? "PASS" : "FAIL"));
}

void print_verify(const VerifyReport& v) {
    std::printf("verify:\n");
    std::printf("  %-28s %s\n", "kappa window", v.kappa_window ? "yes" : "no");
    print_verify_line("A2 positive interior", true, v.positive_a2);
    print_verify_line("fully nontrivial", true, v.semi_trivial == Triviality::fully_nontrivial);
    if (v.flux_checked) {
        print_verify_line("flux targets", true, v.flux_ok);
    }
    print_verify_line("amplitude sandwich", v.sandwich_applicable, v.sandwich_ok);
    if (v.sandwich_applicable) {
        std::printf("  %-28s %.6g < %.6g < %.6g\n", "  lo < M2 < hi", v.sandwich_lo, v.m2,
                    v.sandwich_hi);
    }
    print_verify_line("A1^2 tail decay", v.decay_applicable, v.decay_fit_ok && v.decay_a1_ok);
    print_verify_line("A2^2 tail decay (stated)", v.decay_applicable,
                      v.decay_fit_ok && v.decay_a2_stmt_ok);
    if (v.decay_applicable && v.decay_fit_ok) {
        std::printf("  %-28s %.6g (bound %.6g), %.6g (bounds %.6g / %.6g)\n", "  fitted rates",
                    v.decay_rate_a1, v.decay_bound_a1, v.decay_rate_a2, v.decay_bound_a2_stmt,
                    v.decay_bound_a2_proof);
    }
    std::printf("  %-28s %s\n", "all_pass", v.all_pass ? "true" : "false");
}

struct GridSetup {
    std::shared_ptr<const RadialGrid> grid;
    std::filesystem::path out;
};

GridSetup grid_setup(const RunConfig& cfg) {
    GridSetup s;
    s.grid = make_grid(cfg.require_double("R"), cfg.require_int("n"));
    s.out = cfg.get_string("out", ".");
    return s;
}

int mode_minimize(const RunConfig& cfg) {
    const GridSetup s = grid_setup(cfg);
    const int l = cfg.get_int("l", 1);
    const FluxTargets targets{cfg.require_double("q1"), cfg.require_double("q2")};
    std::string reason;
    if (!check_flux_window(targets, l, &reason)) {
        throw std::invalid_argument("flux window: " + reason);
    }

    std::optional<VortexPair> seed;
    if (cfg.has("seed_file")) {
        seed = read_pair_csv(cfg.require_string("seed_file"), PhysicsParams{0.0, 0.0, l, 0.0});
    } else if (cfg.get_string("min.seed", "tent") == "random") {
        seed = random_seed_pair(s.grid, l, targets, rng_seed_of(cfg));
    }

    auto [pair, srep] = minimize(s.grid, l, targets, minimize_options(cfg),
                                 seed ? &*seed : nullptr);
    std::printf("minimize: %s after %d iterations, I = %.9g, kappa = %.9g, beta = %.9g\n",
                srep.converged ? "converged" : "NOT converged", srep.iters, srep.final_I,
                srep.kappa, srep.beta);

    auto [polished, prep] = refine(pair, pair.params(), newton_options(cfg));
    std::printf("polish: residual %.3g in %d iteration(s)%s\n", prep.residual_max, prep.iters,
                prep.converged ? "" : " (NOT converged)");

    const VerifyReport vrep = verify_all(polished);
    const FunctionalValues fvals = functional_values(polished);
    print_verify(vrep);

    write_pair_csv(s.out / "profile.csv", polished);
    write_report_json(s.out / "report.json", &srep, &prep, &vrep, &fvals);
    return (srep.converged && prep.converged) ? 0 : 2;
}

int mode_mpass(const RunConfig& cfg) {
    const GridSetup s = grid_setup(cfg);
    const PhysicsParams p{cfg.require_double("kappa"), cfg.require_double("beta"),
                          cfg.get_int("l", 1), s.grid->radius()};

    std::vector<MpHistoryRow> history;
    auto [cand, srep] = mp_solve(p, s.grid, mp_options(cfg), &history);
    std::printf("mpass: %s after %d rounds, J = %.9g, grad max-norm = %.3g\n",
                srep.converged ? "converged" : "NOT converged", srep.iters, srep.final_J,
                srep.proj_grad_norm);
    write_mp_history_csv(s.out / "path_history.csv", history);

    auto [polished, prep] = refine(cand, p, newton_options(cfg));
    std::printf("polish: residual %.3g in %d iteration(s)%s%s\n", prep.residual_max, prep.iters,
                prep.converged ? "" : " (NOT converged)",
                prep.trivial ? " (TRIVIAL root)" : "");

    const VerifyReport vrep = verify_all(polished);
    const FunctionalValues fvals = functional_values(polished);
    print_verify(vrep);

    write_pair_csv(s.out / "profile.csv", polished);
    write_report_json(s.out / "report.json", &srep, &prep, &vrep, &fvals);
    return (srep.converged && prep.converged && !prep.trivial) ? 0 : 2;
}

int mode_refine(const RunConfig& cfg) {
    const PhysicsParams p{cfg.require_double("kappa"), cfg.require_double("beta"),
                          cfg.get_int("l", 1), cfg.get_double("R", 0.0)};
    const VortexPair start = read_pair_csv(cfg.require_string("seed_file"), p);
    const std::filesystem::path out = cfg.get_string("out", ".");

    auto [polished, prep] = refine(start, start.params(), newton_options(cfg));
    std::printf("refine: %s, residual %.3g in %d iteration(s)%s\n",
                prep.converged ? "converged" : "NOT converged", prep.residual_max, prep.iters,
                prep.trivial ? " (TRIVIAL root)" : "");

    const VerifyReport vrep = verify_all(polished);
    const FunctionalValues fvals = functional_values(polished);
    print_verify(vrep);

    write_pair_csv(out / "profile.csv", polished);
    write_report_json(out / "report.json", nullptr, &prep, &vrep, &fvals);
    return (prep.converged && !prep.trivial) ? 0 : 2;
}

int mode_verify(const RunConfig& cfg) {
    const PhysicsParams p{cfg.require_double("kappa"), cfg.require_double("beta"),
                          cfg.get_int("l", 1), cfg.get_double("R", 0.0)};
    const VortexPair pair = read_pair_csv(cfg.require_string("seed_file"), p);
    const std::filesystem::path out = cfg.get_string("out", ".");

    std::optional<FluxTargets> targets;
    if (cfg.has("q1") && cfg.has("q2")) {
        targets = FluxTargets{cfg.require_double("q1"), cfg.require_double("q2")};
    }
    const VerifyReport vrep = verify_all(pair, targets, cfg.get_double("verify.tol", 1e-8));
    const FunctionalValues fvals = functional_values(pair);
    print_verify(vrep);

    write_report_json(out / "report.json", nullptr, nullptr, &vrep, &fvals);
    return vrep.all_pass ? 0 : 2;
}

int mode_quadcheck(const RunConfig& cfg) {
    const double R = cfg.get_double("R", 2.0);
    const int n = cfg.get_int("n", 8192);
    const double b = cfg.get_double("quad.b", 1.0);
    const double a = R / 2.0;
    const auto grid = make_grid(R, n);
    const double slope = b / a;

    const auto tent_at = [&](double r) { return (r <= a) ? slope * r : slope * (2.0 * a - r); };

    struct Row {
        const char* name;
        double closed;
        double quad;
    };
    const Row rows[] = {
        {"int r A0^2 dr", 2.0 / 3.0 * a * a * b * b,
         integrate(*grid, [&](double r) { const double v = tent_at(r); return v * v; })},
        // The derivative squares to the constant (b/a)^2 on both linear
        // pieces, so sampling that constant integrates it exactly; a
        // difference stencil would smear the kink instead.
        {"int r A0_r^2 dr", 2.0 * b * b, integrate(*grid, [&](double) { return slope * slope; })},
        {"int A0^2/r dr", 2.0 * b * b * (2.0 * std::log(2.0) - 1.0),
         integrate(*grid,
                   [&](double r) {
                       if (r == 0.0) {
                           return slope * slope; // limit of (A0/r)^2 at the axis
                       }
                       const double v = tent_at(r) / r;
                       return v * v;
                   })},
        {"int r A0^3 dr", 0.5 * a * a * b * b * b,
         integrate(*grid, [&](double r) { const double v = tent_at(r); return v * v * v; })},
    };

    std::printf("quadrature self-check: R = %g, n = %d, tent a = %g, b = %g\n", R, n, a, b);
    std::printf("  %-18s %22s %22s %12s\n", "integral", "closed form", "quadrature", "rel err");
    bool ok = true;
    for (const Row& row : rows) {
        const double rel = std::abs(row.quad - row.closed) / std::abs(row.closed);
        ok = ok && rel <= 1e-4;
        std::printf("  %-18s %22.15g %22.15g %12.3e\n", row.name, row.closed, row.quad, rel);
    }
    std::printf("quadcheck: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 2;
}

int mode_sweep(const RunConfig& cfg) {
    const std::string param = cfg.require_string("sweep.param");
    if (param != "kappa" && param != "beta" && param != "l") {
        throw std::invalid_argument("sweep.param must be one of kappa, beta, l");
    }
    const std::string inner = cfg.get_string("sweep.mode", "mpass");
    if (inner != "mpass" && inner != "minimize") {
        throw std::invalid_argument("sweep.mode must be mpass or minimize");
    }
    if (inner == "minimize" && param != "l") {
        throw std::invalid_argument(
            "minimize extracts kappa and beta; only an l sweep is meaningful");
    }
    const double from = cfg.require_double("sweep.from");
    const double to = cfg.require_double("sweep.to");
    const double step = cfg.require_double("sweep.step");
    if (step == 0.0 || (to - from) * step < 0.0) {
        throw std::invalid_argument("sweep range is empty or runs against its step");
    }
    std::vector<double> values;
    for (double v = from; (step > 0.0) ? v <= to + 1e-12 * std::abs(step)
                                       : v >= to - 1e-12 * std::abs(step);
         v += step) {
        values.push_back(v);
    }
    if (values.size() < 2) {
        throw std::invalid_argument("sweep needs at least 2 steps");
    }

    const GridSetup s = grid_setup(cfg);
    const NewtonOptions newton_opts = newton_options(cfg);
    const MpConstants consts = mp_constants(s.grid->radius());

    std::ostringstream summary;
    summary << "step,value,level,kappa,beta,m1,m2,decay_rate_a1,decay_rate_a2,all_pass\n";
    bool all_ok = true;
    std::optional<VortexPair> warm;

    for (std::size_t k = 0; k < values.size(); ++k) {
        const double v = values[k];
        char stepdir[16];
        std::snprintf(stepdir, sizeof(stepdir), "step_%02zu", k);
        const std::filesystem::path outdir = s.out / stepdir;

        PhysicsParams p{cfg.get_double("kappa", 0.0), cfg.get_double("beta", 0.0),
                        cfg.get_int("l", 1), s.grid->radius()};
        if (param == "kappa") {
            p.kappa = v;
        } else if (param == "beta") {
            p.beta = v;
        } else {
            const int li = static_cast<int>(v);
            if (static_cast<double>(li) != v || li == 0) {
                throw std::invalid_argument("sweep over l needs nonzero integer values");
            }
            p.l = li;
        }

        std::printf("sweep step %zu: %s = %.9g\n", k, param.c_str(), v);
        bool step_ok = false;
        try {
            std::optional<VortexPair> solution;
            SolveReport srep;
            SolveReport prep;
            double level = std::numeric_limits<double>::quiet_NaN();

            if (inner == "mpass") {
                // Warm start: continue the branch by refining the previous
                // solution at the new parameters; fall back to a cold
                // mountain-pass search when continuation fails.
                if (warm) {
                    auto [cont, crep] = refine(warm->with_params(p), p, newton_opts);
                    if (crep.converged && !crep.trivial &&
                        classify_triviality(cont) == Triviality::fully_nontrivial &&
                        action_J(cont) >= consts.C0 - 1e-9) {
                        solution = std::move(cont);
                        prep = std::move(crep);
                        srep = prep;
                        srep.message = "warm start: continued from the previous sweep step";
                    }
                }
                if (!solution) {
                    std::vector<MpHistoryRow> history;
                    auto [cand, mrep] = mp_solve(p, s.grid, mp_options(cfg), &history);
                    write_mp_history_csv(outdir / "path_history.csv", history);
                    auto [polished, rrep] = refine(cand, p, newton_opts);
                    srep = std::move(mrep);
                    prep = std::move(rrep);
                    solution = std::move(polished);
                }
                level = action_J(*solution);
                step_ok = prep.converged && !prep.trivial;
            } else {
                const FluxTargets targets{cfg.require_double("q1"), cfg.require_double("q2")};
                auto [pair, mrep] = minimize(s.grid, p.l, targets, minimize_options(cfg),
                                             warm ? &*warm : nullptr);
                auto [polished, rrep] = refine(pair, pair.params(), newton_opts);
                srep = std::move(mrep);
                prep = std::move(rrep);
                solution = std::move(polished);
                level = srep.final_I;
                step_ok = srep.converged && prep.converged;
            }

            const VerifyReport vrep = verify_all(*solution);
            const FunctionalValues fvals = functional_values(*solution);
            write_pair_csv(outdir / "profile.csv", *solution);
            write_report_json(outdir / "report.json", &srep, &prep, &vrep, &fvals);

            summary << k << ',' << format_full(v) << ',' << format_full(level) << ','
                    << format_full(solution->params().kappa) << ','
                    << format_full(solution->params().beta) << ','
                    << format_full(vrep.m1) << ',' << format_full(vrep.m2) << ','
                    << format_full(vrep.decay_rate_a1) << ',' << format_full(vrep.decay_rate_a2)
                    << ',' << (vrep.all_pass ? "true" : "false") << '\n';
            step_ok = step_ok && vrep.all_pass;
            warm = std::move(solution);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "sweep step %zu failed: %s\n", k, e.what());
            const std::string nan = "nan";
            summary << k << ',' << format_full(v) << ',' << nan << ',' << nan << ',' << nan
                    << ',' << nan << ',' << nan << ',' << nan << ',' << nan << ",false\n";
            warm.reset(); // next step restarts cold
            step_ok = false;
        }
        all_ok = all_ok && step_ok;
    }

    std::filesystem::create_directories(s.out);
    std::ofstream out(s.out / "sweep_summary.csv");
    if (!out) {
        throw std::runtime_error("cannot write sweep_summary.csv");
    }
    out << summary.str();
    return all_ok ? 0 : 2;
}

} // namespace

int run(const RunConfig& config) {
    try {
        const std::string mode = config.require_string("mode");
        if (mode == "minimize") {
            return mode_minimize(config);
        }
        if (mode == "mpass") {
            return mode_mpass(config);
        }
        if (mode == "refine") {
            return mode_refine(config);
        }
        if (mode == "verify") {
            return mode_verify(config);
        }
        if (mode == "sweep") {
            return mode_sweep(config);
        }
        if (mode == "quadcheck") {
            return mode_quadcheck(config);
        }
        throw std::invalid_argument("unknown mode '" + mode + "'");
    } catch (const SolverFailureError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const PathDegenerationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SingularSystemError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace vortex
