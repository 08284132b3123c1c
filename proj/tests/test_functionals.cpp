#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "vortexforge/functionals.hpp"
#include "vortexforge/mountain_pass.hpp"
#include "vortexforge/radial_grid.hpp"

using namespace vortex;

namespace {

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Smooth random profile: a few sine modes with random amplitudes.
Profile random_smooth(const std::shared_ptr<const RadialGrid>& g, std::mt19937_64& eng,
                      double scale = 1.0) {
    double c[4];
    for (double& ck : c) {
        ck = 2.0 * uniform01(eng) - 1.0;
    }
    std::vector<double> v(static_cast<std::size_t>(g->size()));
    for (int i = 0; i < g->size(); ++i) {
        const double x = g->node(i) / g->radius();
        double s = 0.0;
        for (int k = 0; k < 4; ++k) {
            s += c[k] * std::sin((k + 1) * std::numbers::pi * x) / (k + 1);
        }
        v[static_cast<std::size_t>(i)] = scale * s;
    }
    return Profile(g, std::move(v));
}

double wdot(const Profile& x, const Profile& y) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        s += x.grid().weight(i) * x[i] * y[i];
    }
    return s;
}

double moment2(const Profile& x) {
    return wdot(x, x);
}

} // namespace

TEST_CASE("J equals I plus the flux multiplier terms") {
    const auto g = make_grid(10.0, 129);
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const double kappa = 2.0 * uniform01(eng) - 0.5;
        const double beta = 2.0 * uniform01(eng) - 1.0;
        const VortexPair pair(random_smooth(g, eng), random_smooth(g, eng),
                              PhysicsParams{kappa, beta, 1, g->radius()});
        const double lhs = action_J(pair);
        const double rhs = action_I(pair) + kappa * moment2(pair.a1())
                           + (2.0 * kappa + beta) * moment2(pair.a2());
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("gradients match finite differences of I and J") {
    const auto g = make_grid(10.0, 256);
    std::mt19937_64 eng(11);
    const double eps = 1e-5;
    for (int trial = 0; trial < 5; ++trial) {
        const PhysicsParams p{0.7, -0.2, 1, g->radius()};
        const VortexPair pair(random_smooth(g, eng), random_smooth(g, eng), p);
        const Profile v1 = random_smooth(g, eng);
        const Profile v2 = random_smooth(g, eng);

        const auto shift = [&](double t) {
            std::vector<double> a(pair.a1().values().begin(), pair.a1().values().end());
            std::vector<double> b(pair.a2().values().begin(), pair.a2().values().end());
            for (int i = 0; i < g->size(); ++i) {
                a[static_cast<std::size_t>(i)] += t * v1[i];
                b[static_cast<std::size_t>(i)] += t * v2[i];
            }
            return VortexPair(Profile(g, std::move(a)), Profile(g, std::move(b)), p);
        };

        const auto [gi1, gi2] = grad_I(pair);
        const double pred_I = wdot(gi1, v1) + wdot(gi2, v2);
        const double fd_I = (action_I(shift(eps)) - action_I(shift(-eps))) / (2.0 * eps);
        CHECK(std::abs(fd_I - pred_I) <= 1e-6 * std::max(1.0, std::abs(fd_I)));

        const auto [gj1, gj2] = grad_J(pair);
        const double pred_J = wdot(gj1, v1) + wdot(gj2, v2);
        const double fd_J = (action_J(shift(eps)) - action_J(shift(-eps))) / (2.0 * eps);
        CHECK(std::abs(fd_J - pred_J) <= 1e-6 * std::max(1.0, std::abs(fd_J)));

        // grad_J - grad_I is exactly the multiplier term, node by node
        for (int i = 0; i < g->size(); ++i) {
            CHECK(gj1[i] - gi1[i]
                  == doctest::Approx(2.0 * p.kappa * pair.a1()[i]).epsilon(1e-13));
            CHECK(gj2[i] - gi2[i]
                  == doctest::Approx(2.0 * (2.0 * p.kappa + p.beta) * pair.a2()[i])
                         .epsilon(1e-13));
        }
    }
}

TEST_CASE("flux of sin(pi r) on the unit disc") {
    const auto g = make_grid(1.0, 2047);
    std::vector<double> v(2047);
    for (int i = 0; i < g->size(); ++i) {
        v[static_cast<std::size_t>(i)] = std::sin(std::numbers::pi * g->node(i));
    }
    const double q = flux_Q(Profile(g, std::move(v)));
    // 2*pi * int_0^1 r sin^2(pi r) dr = 2*pi * 1/4
    CHECK(std::abs(q - std::numbers::pi / 2.0) <= 1e-8);
}

TEST_CASE("energy and action of tent pairs against closed forms") {
    const auto g = make_grid(2.0, 8191);
    const Profile a0 = tent_profile(g, TentParams{1.0, 1.0});
    const Profile zero(g);
    const double twol2 = 2.0 * std::log(2.0) - 1.0;

    const PhysicsParams p{1.0, 0.0, 1, g->radius()};
    const double e = energy_E(VortexPair(a0, zero, p));
    CHECK(std::abs(e - (2.0 + 2.0 * twol2)) <= 1e-4);

    const double i_val = action_I(VortexPair(a0, a0, p));
    const double closed = 0.5 * (2.0 + 1.0 + 6.0 * twol2 - 1.0);
    CHECK(std::abs(i_val - closed) <= 1e-4);
}

TEST_CASE("quartic interpolation inequality on random profiles") {
    const auto g = make_grid(5.0, 200);
    std::mt19937_64 eng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Profile a = random_smooth(g, eng, 0.2 + 2.0 * uniform01(eng));
        double quart = 0.0;
        double sq = 0.0;
        double sing = 0.0;
        for (int i = 0; i < g->size(); ++i) {
            const double w = g->weight(i);
            const double r = g->node(i);
            quart += w * a[i] * a[i] * a[i] * a[i];
            sq += w * a[i] * a[i];
            sing += w * a[i] * a[i] / (r * r);
        }
        const double de = derivative_energy(a);
        CHECK(quart <= 2.0 * sq * std::sqrt(de) * std::sqrt(sing) + 1e-12);
    }
}

TEST_CASE("h-norm dominates the flux moment") {
    const auto g = make_grid(4.0, 150);
    std::mt19937_64 eng(31);
    for (const int l : {1, 2, 3}) {
        const Profile a = random_smooth(g, eng);
        const double lhs = h_norm_sq(a, l);
        const double rhs = (l * l) / (g->radius() * g->radius()) * moment2(a);
        CHECK(lhs >= rhs - 1e-12);
    }
}

TEST_CASE("taking absolute values cannot raise I when A2 is nonnegative") {
    const auto g = make_grid(3.0, 120);
    std::mt19937_64 eng(41);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(g->size()));
        std::vector<double> b(static_cast<std::size_t>(g->size()));
        for (auto& x : a) {
            x = 2.0 * uniform01(eng) - 1.0; // sign-indefinite
        }
        for (auto& x : b) {
            x = uniform01(eng); // nonnegative
        }
        std::vector<double> abs_a = a;
        for (auto& x : abs_a) {
            x = std::abs(x);
        }
        const PhysicsParams p{0.0, 0.0, 1, g->radius()};
        const double before = action_I(VortexPair(Profile(g, a), Profile(g, b), p));
        const double after = action_I(VortexPair(Profile(g, abs_a), Profile(g, b), p));
        CHECK(after <= before + 1e-12 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("flux scales quadratically") {
    const auto g = make_grid(2.0, 64);
    std::mt19937_64 eng(5);
    const Profile a = random_smooth(g, eng);
    std::vector<double> scaled(a.values().begin(), a.values().end());
    for (double& x : scaled) {
        x *= 3.0;
    }
    CHECK(flux_Q(a.with_values(std::move(scaled)))
          == doctest::Approx(9.0 * flux_Q(a)).epsilon(1e-13));
}

TEST_CASE("vortex pair validation") {
    const auto g = make_grid(2.0, 64);
    const auto other = make_grid(2.0, 65);
    const Profile a(g);
    const Profile b(other);
    CHECK_THROWS_AS(VortexPair(a, b, PhysicsParams{1.0, 0.0, 1, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(VortexPair(a, a, PhysicsParams{1.0, 0.0, 0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(VortexPair(a, a, PhysicsParams{1.0, 0.0, 1, 3.0}), std::invalid_argument);
    CHECK_NOTHROW(VortexPair(a, a, PhysicsParams{1.0, 0.0, 1, 2.0}));
}

TEST_CASE("kappa window") {
    CHECK(kappa_window_ok(PhysicsParams{1.0, 0.0, 1, 1.0}));
    CHECK(kappa_window_ok(PhysicsParams{0.3, -0.5, 1, 1.0}));
    CHECK_FALSE(kappa_window_ok(PhysicsParams{0.2, -0.5, 1, 1.0}));
    CHECK_FALSE(kappa_window_ok(PhysicsParams{-1.0, 0.0, 1, 1.0}));
    CHECK_FALSE(kappa_window_ok(PhysicsParams{0.0, 0.0, 1, 1.0}));
}

TEST_CASE("functional_values mirrors the individual functionals") {
    const auto g = make_grid(10.0, 100);
    std::mt19937_64 eng(3);
    const VortexPair pair(random_smooth(g, eng), random_smooth(g, eng),
                          PhysicsParams{1.0, -0.3, 2, g->radius()});
    const FunctionalValues fv = functional_values(pair);
    CHECK(fv.q1 == doctest::Approx(flux_Q(pair.a1())).epsilon(1e-14));
    CHECK(fv.q2 == doctest::Approx(flux_Q(pair.a2())).epsilon(1e-14));
    CHECK(fv.total_flux == doctest::Approx(total_flux(pair)).epsilon(1e-14));
    CHECK(fv.E == doctest::Approx(energy_E(pair)).epsilon(1e-14));
    CHECK(fv.I == doctest::Approx(action_I(pair)).epsilon(1e-14));
    CHECK(fv.J == doctest::Approx(action_J(pair)).epsilon(1e-14));
    CHECK(fv.residual_max == doctest::Approx(residual_max(pair)).epsilon(1e-14));
}
