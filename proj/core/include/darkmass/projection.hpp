#pragma once

#include <vector>

#include "darkmass/grids.hpp"
#include "darkmass/model.hpp"
#include "darkmass/observation.hpp"

namespace darkmass {

/// Quadrature settings for the projected-pdf integrals.
struct ProjectionConfig {
    int gl_order = 16;        // Gauss-Legendre order per smooth sub-interval
    int gh_nodes = 11;        // Gauss-Hermite nodes for the error convolution
    bool convolve_errors = false;
};

/// Integral of f over the two unobserved velocity components at radius r:
/// 2 pi * df_integral(f, v3^2/2 - Phi(r)), or 0 for an unbound point.
/// Exact because the isotropic f depends on (v1, v2) only through
/// E = (v_perp^2 + v3^2)/2 - Phi.
double inner_velocity_integral(const PotentialProfile& profile, const DfVector& f,
                               const EnergyGrid& egrid, double r, double v3);

/// Per-energy-bin line-of-sight weights a_j, so that the unnormalized
/// projected pdf at (rp, v3) is sum_j a_j f_j. The x3 axis is split wherever
/// the running radius crosses a radial edge or the running energy crosses an
/// energy edge, and fixed-order Gauss-Legendre is applied per sub-interval.
std::vector<double> los_energy_row(const PotentialProfile& profile, const EnergyGrid& egrid,
                                   const RadialGrid& grid, double rp, double v3,
                                   const ProjectionConfig& cfg);

/// 2 * integral over x3 in [0, sqrt(r_N^2 - rp^2)] of the inner velocity
/// integral; zero outside the truncation radius or above the escape cut.
double project_pdf_unnorm(const PotentialProfile& profile, const DfVector& f,
                          const EnergyGrid& egrid, const RadialGrid& grid, double rp, double v3,
                          const ProjectionConfig& cfg);

/// Density-of-states weights w_j = 16 pi^2 \int_bin \int_0^{min(r_N, r_E)}
/// r^2 sqrt(2 (E + Phi(r))) dr dE; energy below -Phi(0) holds no bound
/// states and is clamped away. The phase-space norm is sum_j f_j w_j.
std::vector<double> dos_weights(const PotentialProfile& profile, const EnergyGrid& egrid,
                                const RadialGrid& grid, const ProjectionConfig& cfg);

double phase_space_norm(const DfVector& f, const std::vector<double>& weights);

/// Normalized projected pdf at one observation; convolves with the datum's
/// Gaussian velocity error when enabled. Throws std::domain_error when the
/// phase-space norm vanishes (degenerate model).
double project_pdf(const PotentialProfile& profile, const DfVector& f, const EnergyGrid& egrid,
                   const RadialGrid& grid, const Observation& obs, const ProjectionConfig& cfg);

}  // namespace darkmass
