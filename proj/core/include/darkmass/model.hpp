#pragma once

#include <array>
#include <vector>

#include "darkmass/grids.hpp"

namespace darkmass {

struct PhasePoint {
    std::array<double, 3> x{};
    std::array<double, 3> v{};
};

/// Piecewise solution of the spherical Poisson equation
/// nabla^2 Phi = -4 pi G rho for a piecewise-constant density truncated at
/// the outermost grid edge. Phi >= 0, decreases outward, and is Keplerian
/// (G M_tot / r) beyond the grid. Inside bin i,
///   Phi(r) = alpha_i / r + beta_i + gamma_i r^2,
/// with alpha_0 = 0 so the centre is regular.
struct PotentialProfile {
    std::vector<double> edges;          // r_0..r_N
    std::vector<double> mass_at_edges;  // M(r_0)..M(r_N)
    std::vector<double> alpha, beta, gamma;
    std::vector<double> phi_at_edges;   // Phi(r_0)..Phi(r_N)
    double total_mass = 0.0;
    double phi_center = 0.0;            // Phi(0)
    double G = 1.0;

    double outer_radius() const { return edges.back(); }
    double phi_outer() const { return phi_at_edges.back(); }
};

PotentialProfile build_potential_profile(const DensityVector& rho, const RadialGrid& grid,
                                         double G);

/// M(r) = 4 pi sum_i rho_i (min(r, r_i)^3 - min(r, r_{i-1})^3) / 3;
/// equals the total mass for r beyond the grid. Negative r is a domain error.
double enclosed_mass(const DensityVector& rho, const RadialGrid& grid, double r);

/// Phi(r) under the profile's sign convention. Negative r is a domain error.
double potential(const PotentialProfile& profile, double r);

/// Inverse of the monotone Phi on [0, r_N] by bisection; phi_target must lie
/// in [Phi(r_N), Phi(0)] (range error otherwise). Where Phi is flat the
/// smallest matching radius is returned.
double radius_of_potential(const PotentialProfile& profile, double phi_target);

/// E = |v|^2 / 2 - Phi(|x|); bound orbits have E <= 0.
double energy(const PotentialProfile& profile, const PhasePoint& p);

/// Integral of the piecewise-constant f over [max(e_low, E_0), E_N];
/// f vanishes outside its grid and the result is 0 once e_low >= E_N.
double df_integral(const DfVector& f, const EnergyGrid& egrid, double e_low);

}  // namespace darkmass
