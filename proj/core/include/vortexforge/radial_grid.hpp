#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace vortex {

/// Uniform radial mesh for Dirichlet problems on (0, R).
///
/// Interior nodes are r_i = i*h, i = 1..n, with spacing h = R/(n+1).  The
/// endpoints r = 0 and r = R carry implicit zero values and are never stored
/// as unknowns.  Quadrature approximates integrals in the radial measure,
/// \int_0^R f(r) r dr, with hat-function (trapezoid-consistent) weights:
/// the interior node i has weight h*r_i, and the two half-cells touching the
/// boundaries contribute h^2/6 at r = 0 and h*R/2 - h^2/6 at r = R.  The full
/// weight vector therefore sums to R^2/2 = \int_0^R r dr exactly up to
/// roundoff, which keeps moment errors flat under refinement.
class RadialGrid {
public:
    /// Builds the mesh; throws std::invalid_argument for R <= 0 or n < 8.
    RadialGrid(double R, int n);

    double radius() const { return R_; }
    int size() const { return n_; }
    double spacing() const { return h_; }

    /// Interior node radius r_i, 0-based: node(i) = (i+1)*h.
    double node(int i) const { return nodes_[i]; }
    std::span<const double> nodes() const { return nodes_; }

    /// Quadrature weight of interior node i (0-based), equal to h*r_i.
    double weight(int i) const { return weights_[i + 1]; }

    /// All n+2 weights including the boundary half-cell masses at positions
    /// 0 and n+1; sums to R^2/2.
    std::span<const double> weights() const { return weights_; }

private:
    double R_;
    int n_;
    double h_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

std::shared_ptr<const RadialGrid> make_grid(double R, int n);

/// One real radial amplitude sampled at the interior nodes of a shared grid.
/// The extension to r = 0 and r = R is identically zero by construction, so a
/// Profile always satisfies the Dirichlet boundary conditions exactly.
class Profile {
public:
    /// Throws std::invalid_argument on size mismatch or non-finite entries.
    Profile(std::shared_ptr<const RadialGrid> grid, std::vector<double> values);

    /// Zero profile on the given grid.
    explicit Profile(std::shared_ptr<const RadialGrid> grid);

    const RadialGrid& grid() const { return *grid_; }
    std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    /// Replaces the nodal values; same validation as the constructor.
    Profile with_values(std::vector<double> values) const;

private:
    std::shared_ptr<const RadialGrid> grid_;
    std::vector<double> values_;
};

/// \int_0^R A(r) r dr by the grid quadrature; the boundary weights multiply
/// the implicit zero values and drop out.
double integrate(const Profile& A);

/// \int_0^R f(r) r dr for a function sampled at the nodes and both endpoints
/// (the boundary weights see f(0) and f(R) here, unlike the Profile overload).
double integrate(const RadialGrid& grid, const std::function<double(double)>& f);

/// Second-order central first derivative, using the implicit zeros at r = 0
/// and r = R for the one-sided neighbors.
Profile ddr(const Profile& A);

/// Pointwise A(r_i)/r_i^2 — the singular vortex potential applied to a
/// profile.  Finite because r_1 = h > 0.
Profile weighted_div_r2(const Profile& A);

/// Discrete radial Laplacian L A = A'' + A'/r with zero Dirichlet ghosts.
Profile apply_radial_laplacian(const Profile& A);

/// \int_0^R A_r^2 r dr evaluated as the quadratic form <-L A, A> of the
/// discrete Laplacian in the r dr inner product.  Summed cellwise as
/// sum_i r_{i+1/2} (A_{i+1}-A_i)^2 / h, which is symmetric positive definite
/// and exactly consistent with the Newton stencil: gradients assembled from L
/// are the exact derivatives of energies assembled here.
double derivative_energy(const Profile& A);

} // namespace vortex
