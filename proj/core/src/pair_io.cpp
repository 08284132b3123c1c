#include "vortexforge/pair_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace vortex {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, int lineno) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size() || !std::isfinite(v)) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                 ": not a finite number: '" + s + "'");
    }
    return v;
}

} // namespace

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_profile_csv(const std::filesystem::path& path, const Profile& A) {
    std::ofstream out = open_out(path);
    const RadialGrid& g = A.grid();
    out << "r,value\n";
    out << "0,0\n";
    for (int i = 0; i < g.size(); ++i) {
        out << format_full(g.node(i)) << ',' << format_full(A[i]) << '\n';
    }
    out << format_full(g.radius()) << ",0\n";
}

void write_pair_csv(const std::filesystem::path& path, const VortexPair& pair) {
    std::ofstream out = open_out(path);
    const RadialGrid& g = pair.grid();
    out << "r,a1,a2\n";
    out << "0,0,0\n";
    for (int i = 0; i < g.size(); ++i) {
        out << format_full(g.node(i)) << ',' << format_full(pair.a1()[i]) << ','
            << format_full(pair.a2()[i]) << '\n';
    }
    out << format_full(g.radius()) << ",0,0\n";
}

VortexPair read_pair_csv(const std::filesystem::path& path, PhysicsParams params) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open pair CSV: " + path.string());
    }
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line) || line != "r,a1,a2") {
        throw std::runtime_error(path.string() + ": expected header 'r,a1,a2'");
    }
    ++lineno;
    std::vector<double> r;
    std::vector<double> a1;
    std::vector<double> a2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 3) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected 3 fields");
        }
        r.push_back(parse_double(f[0], path, lineno));
        a1.push_back(parse_double(f[1], path, lineno));
        a2.push_back(parse_double(f[2], path, lineno));
    }
    const int rows = static_cast<int>(r.size());
    if (rows < 10) {
        throw std::runtime_error(path.string() + ": too few rows for a valid pair");
    }
    const double R = r.back();
    if (r.front() != 0.0 || !(R > 0.0)) {
        throw std::runtime_error(path.string() + ": rows must span r = 0 .. R");
    }
    if (a1.front() != 0.0 || a2.front() != 0.0 || a1.back() != 0.0 || a2.back() != 0.0) {
        throw std::runtime_error(path.string() + ": boundary rows must carry zero values");
    }
    if (params.R > 0.0 && std::abs(params.R - R) > 1e-9 * R) {
        throw std::runtime_error(path.string() + ": file radius disagrees with configured R");
    }
    const int n = rows - 2;
    auto grid = make_grid(R, n);
    for (int i = 0; i < n; ++i) {
        if (std::abs(r[i + 1] - grid->node(i)) > 1e-9 * R) {
            throw std::runtime_error(path.string() + ": nodes are not uniformly spaced");
        }
    }
    params.R = R;
    return VortexPair(Profile(grid, std::vector<double>(a1.begin() + 1, a1.end() - 1)),
                      Profile(grid, std::vector<double>(a2.begin() + 1, a2.end() - 1)),
                      params);
}

void write_mp_history_csv(const std::filesystem::path& path,
                          std::span<const MpHistoryRow> rows) {
    std::ofstream out = open_out(path);
    out << "round,max_J,argmax_t,grad_norm\n";
    for (const MpHistoryRow& row : rows) {
        out << row.round << ',' << format_full(row.max_J) << ',' << format_full(row.argmax_t)
            << ',' << format_full(row.grad_norm) << '\n';
    }
}

namespace {

ordered_json solve_to_json(const SolveReport& r) {
    ordered_json j;
    j["kappa"] = r.kappa;
    j["beta"] = r.beta;
    j["iters"] = r.iters;
    j["final_I"] = r.final_I;
    j["final_J"] = r.final_J;
    j["q1"] = r.q1;
    j["q2"] = r.q2;
    j["proj_grad_norm"] = r.proj_grad_norm;
    j["residual_max"] = r.residual_max;
    j["converged"] = r.converged;
    j["trivial"] = r.trivial;
    j["message"] = r.message;
    return j;
}

ordered_json verify_to_json(const VerifyReport& r) {
    ordered_json j;
    j["kappa_window"] = r.kappa_window;
    j["positive_a2"] = r.positive_a2;
    j["semi_trivial"] = to_string(r.semi_trivial);
    j["m1"] = r.m1;
    j["m2"] = r.m2;
    j["sandwich_lo"] = r.sandwich_lo;
    j["sandwich_hi"] = r.sandwich_hi;
    j["sandwich_ok"] = r.sandwich_ok;
    j["sandwich_applicable"] = r.sandwich_applicable;
    j["decay_rate_a1"] = r.decay_rate_a1;
    j["decay_rate_a2"] = r.decay_rate_a2;
    j["decay_intercept_a1"] = r.decay_intercept_a1;
    j["decay_intercept_a2"] = r.decay_intercept_a2;
    j["decay_bound_a1"] = r.decay_bound_a1;
    j["decay_bound_a2_stmt"] = r.decay_bound_a2_stmt;
    j["decay_bound_a2_proof"] = r.decay_bound_a2_proof;
    j["decay_a1_ok"] = r.decay_a1_ok;
    j["decay_a2_stmt_ok"] = r.decay_a2_stmt_ok;
    j["decay_a2_proof_ok"] = r.decay_a2_proof_ok;
    j["decay_fit_ok"] = r.decay_fit_ok;
    j["decay_applicable"] = r.decay_applicable;
    j["flux_q1"] = r.flux_q1;
    j["flux_q2"] = r.flux_q2;
    j["flux_checked"] = r.flux_checked;
    j["flux_ok"] = r.flux_ok;
    j["all_pass"] = r.all_pass;
    return j;
}

ordered_json functionals_to_json(const FunctionalValues& v) {
    ordered_json j;
    j["Q1"] = v.q1;
    j["Q2"] = v.q2;
    j["total_flux"] = v.total_flux;
    j["E"] = v.E;
    j["I"] = v.I;
    j["J"] = v.J;
    j["h_norm_sq_1"] = v.h_norm_sq_1;
    j["h_norm_sq_2"] = v.h_norm_sq_2;
    j["residual_max"] = v.residual_max;
    return j;
}

} // namespace

std::string report_json(const SolveReport* solve,
                        const SolveReport* polish,
                        const VerifyReport* verify,
                        const FunctionalValues* functionals) {
    ordered_json j;
    if (solve) {
        j["solve"] = solve_to_json(*solve);
    }
    if (polish) {
        j["polish"] = solve_to_json(*polish);
    }
    if (verify) {
        j["verify"] = verify_to_json(*verify);
    }
    if (functionals) {
        j["functionals"] = functionals_to_json(*functionals);
    }
    return j.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path,
                       const SolveReport* solve,
                       const SolveReport* polish,
                       const VerifyReport* verify,
                       const FunctionalValues* functionals) {
    std::ofstream out = open_out(path);
    out << report_json(solve, polish, verify, functionals);
}

} // namespace vortex
