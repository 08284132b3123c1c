#pragma once

// Span-level kernels shared by the functional evaluators and the solvers'
// hot loops.  Everything here assumes the uniform RadialGrid layout with
// Dirichlet-zero ghost values at r = 0 and r = R.  Internal to core/src.

#include <cstddef>
#include <numbers>
#include <span>

#include "vortexforge/functionals.hpp"
#include "vortexforge/radial_grid.hpp"

namespace vortex::detail {

/// Interior weighted dot product sum_i w_i x_i y_i (w_i = h r_i).
inline double wdot(const RadialGrid& g, std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        s += g.weight(i) * x[i] * y[i];
    }
    return s;
}

/// y = L x with L = d^2/dr^2 + (1/r) d/dr.
inline void laplacian(const RadialGrid& g, std::span<const double> x, std::span<double> y) {
    const int n = g.size();
    const double invh2 = 1.0 / (g.spacing() * g.spacing());
    const double inv2h = 1.0 / (2.0 * g.spacing());
    for (int i = 0; i < n; ++i) {
        const double left = (i > 0) ? x[i - 1] : 0.0;
        const double right = (i < n - 1) ? x[i + 1] : 0.0;
        y[i] = (right - 2.0 * x[i] + left) * invh2 + (right - left) * inv2h / g.node(i);
    }
}

/// \int x_r^2 r dr as the cellwise quadratic form <-L x, x>_w.
inline double deriv_energy(const RadialGrid& g, std::span<const double> x) {
    const int n = g.size();
    const double h = g.spacing();
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double lo = (k > 0) ? x[k - 1] : 0.0;
        const double hi = (k < n) ? x[k] : 0.0;
        const double d = hi - lo;
        s += (k + 0.5) * h * d * d;
    }
    return s / h;
}

inline double flux(const RadialGrid& g, std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        s += g.weight(i) * x[i] * x[i];
    }
    return 2.0 * std::numbers::pi * s;
}

inline double h_norm_sq(const RadialGrid& g, int l, std::span<const double> x) {
    double pot = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        pot += g.weight(i) * x[i] * x[i] / (r * r);
    }
    return deriv_energy(g, x) + static_cast<double>(l) * l * pot;
}

inline double action_I(const RadialGrid& g, int l,
                       std::span<const double> a1, std::span<const double> a2) {
    const double l2 = static_cast<double>(l) * l;
    double pot = 0.0;
    double cubic = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = g.weight(i);
        const double invr2 = 1.0 / (g.node(i) * g.node(i));
        pot += w * invr2 * (l2 * a1[i] * a1[i] + 2.0 * l2 * a2[i] * a2[i]);
        cubic += w * a1[i] * a1[i] * a2[i];
    }
    return 0.5 * (deriv_energy(g, a1) + 0.5 * deriv_energy(g, a2) + pot - 2.0 * cubic);
}

inline double action_J(const RadialGrid& g, double kappa, double beta, int l,
                       std::span<const double> a1, std::span<const double> a2) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = g.weight(i);
        m1 += w * a1[i] * a1[i];
        m2 += w * a2[i] * a2[i];
    }
    return action_I(g, l, a1, a2) + kappa * m1 + (2.0 * kappa + beta) * m2;
}

/// Strong-form residual (F1, F2) into preallocated buffers.
inline void residual(const RadialGrid& g, double kappa, double beta, int l,
                     std::span<const double> a1, std::span<const double> a2,
                     std::span<double> f1, std::span<double> f2) {
    const int n = g.size();
    const double l2 = static_cast<double>(l) * l;
    laplacian(g, a1, f1);
    laplacian(g, a2, f2);
    for (int i = 0; i < n; ++i) {
        const double invr2 = 1.0 / (g.node(i) * g.node(i));
        f1[i] += -l2 * invr2 * a1[i] - 2.0 * (kappa - a2[i]) * a1[i];
        f2[i] += -4.0 * l2 * invr2 * a2[i] - 4.0 * (2.0 * kappa + beta) * a2[i] + 2.0 * a1[i] * a1[i];
    }
}

/// L^2(r dr) gradient of I into preallocated buffers.
inline void grad_I(const RadialGrid& g, int l,
                   std::span<const double> a1, std::span<const double> a2,
                   std::span<double> g1, std::span<double> g2) {
    const int n = g.size();
    const double l2 = static_cast<double>(l) * l;
    laplacian(g, a1, g1);
    laplacian(g, a2, g2);
    for (int i = 0; i < n; ++i) {
        const double invr2 = 1.0 / (g.node(i) * g.node(i));
        g1[i] = -g1[i] + l2 * invr2 * a1[i] - 2.0 * a1[i] * a2[i];
        g2[i] = -0.5 * g2[i] + 2.0 * l2 * invr2 * a2[i] - a1[i] * a1[i];
    }
}

/// grad_J = grad_I + (2 kappa a1, 2 (2 kappa + beta) a2) = (-F1, -1/2 F2).
inline void grad_J(const RadialGrid& g, double kappa, double beta, int l,
                   std::span<const double> a1, std::span<const double> a2,
                   std::span<double> g1, std::span<double> g2) {
    grad_I(g, l, a1, a2, g1, g2);
    for (int i = 0; i < g.size(); ++i) {
        g1[i] += 2.0 * kappa * a1[i];
        g2[i] += 2.0 * (2.0 * kappa + beta) * a2[i];
    }
}

inline double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) {
        const double a = v < 0 ? -v : v;
        if (a > m) {
            m = a;
        }
    }
    return m;
}

} // namespace vortex::detail
