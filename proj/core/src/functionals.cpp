#include "vortexforge/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kernels.hpp"

namespace vortex {

bool kappa_window_ok(const PhysicsParams& p) {
    return p.kappa > std::max(0.0, -p.beta / 2.0);
}

VortexPair::VortexPair(Profile a1, Profile a2, PhysicsParams params)
    : a1_(std::move(a1)), a2_(std::move(a2)), params_(params) {
    if (a1_.grid_ptr().get() != a2_.grid_ptr().get()) {
        throw std::invalid_argument("VortexPair: components live on different grids");
    }
    if (std::abs(a1_.grid().radius() - params_.R) > 1e-12 * std::max(1.0, std::abs(params_.R))) {
        throw std::invalid_argument("VortexPair: grid radius disagrees with params.R");
    }
    if (params_.l == 0) {
        throw std::invalid_argument("VortexPair: vortex number must be nonzero");
    }
}

VortexPair VortexPair::with_params(const PhysicsParams& params) const {
    return VortexPair(a1_, a2_, params);
}

double flux_Q(const Profile& A) {
    return detail::flux(A.grid(), A.values());
}

double total_flux(const VortexPair& pair) {
    return flux_Q(pair.a1()) + 2.0 * flux_Q(pair.a2());
}

double energy_E(const VortexPair& pair) {
    const RadialGrid& g = pair.grid();
    std::span<const double> a1 = pair.a1().values();
    std::span<const double> a2 = pair.a2().values();
    double pot = 0.0;
    double cubic = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = g.weight(i);
        const double invr2 = 1.0 / (g.node(i) * g.node(i));
        pot += w * invr2 * (a1[i] * a1[i] + a2[i] * a2[i]);
        cubic += w * a1[i] * a1[i] * a2[i];
    }
    return detail::deriv_energy(g, a1) + detail::deriv_energy(g, a2) + pot + cubic;
}

double action_I(const VortexPair& pair) {
    return detail::action_I(pair.grid(), pair.params().l, pair.a1().values(), pair.a2().values());
}

double action_J(const VortexPair& pair) {
    const PhysicsParams& p = pair.params();
    return detail::action_J(pair.grid(), p.kappa, p.beta, p.l, pair.a1().values(), pair.a2().values());
}

double h_norm_sq(const Profile& A, int l) {
    return detail::h_norm_sq(A.grid(), l, A.values());
}

double h_norm_sq(const VortexPair& pair) {
    const int l = pair.params().l;
    return h_norm_sq(pair.a1(), l) + h_norm_sq(pair.a2(), l);
}

std::pair<Profile, Profile> grad_I(const VortexPair& pair) {
    const RadialGrid& g = pair.grid();
    std::vector<double> g1(g.size());
    std::vector<double> g2(g.size());
    detail::grad_I(g, pair.params().l, pair.a1().values(), pair.a2().values(), g1, g2);
    return {pair.a1().with_values(std::move(g1)), pair.a2().with_values(std::move(g2))};
}

std::pair<Profile, Profile> grad_J(const VortexPair& pair) {
    const RadialGrid& g = pair.grid();
    const PhysicsParams& p = pair.params();
    std::vector<double> g1(g.size());
    std::vector<double> g2(g.size());
    detail::grad_J(g, p.kappa, p.beta, p.l, pair.a1().values(), pair.a2().values(), g1, g2);
    return {pair.a1().with_values(std::move(g1)), pair.a2().with_values(std::move(g2))};
}

std::pair<Profile, Profile> residual(const VortexPair& pair) {
    const RadialGrid& g = pair.grid();
    const PhysicsParams& p = pair.params();
    std::vector<double> f1(g.size());
    std::vector<double> f2(g.size());
    detail::residual(g, p.kappa, p.beta, p.l, pair.a1().values(), pair.a2().values(), f1, f2);
    return {pair.a1().with_values(std::move(f1)), pair.a2().with_values(std::move(f2))};
}

double residual_max(const VortexPair& pair) {
    auto [f1, f2] = residual(pair);
    return std::max(detail::max_abs(f1.values()), detail::max_abs(f2.values()));
}

double residual_max(const VortexPair& pair, const PhysicsParams& params) {
    return residual_max(pair.with_params(params));
}

FunctionalValues functional_values(const VortexPair& pair) {
    FunctionalValues v;
    v.q1 = flux_Q(pair.a1());
    v.q2 = flux_Q(pair.a2());
    v.total_flux = v.q1 + 2.0 * v.q2;
    v.E = energy_E(pair);
    v.I = action_I(pair);
    v.J = action_J(pair);
    v.h_norm_sq_1 = h_norm_sq(pair.a1(), pair.params().l);
    v.h_norm_sq_2 = h_norm_sq(pair.a2(), pair.params().l);
    v.residual_max = residual_max(pair);
    return v;
}

} // namespace vortex
