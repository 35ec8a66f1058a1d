#include "darkmass/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace darkmass {

namespace {

constexpr double kPi = std::numbers::pi;

double eval_bin(const PotentialProfile& p, std::size_t bin, double r) {
    if (r == 0.0) return p.phi_center;
    return p.alpha[bin] / r + p.beta[bin] + p.gamma[bin] * r * r;
}

// Bin whose half-open radial interval (r_{i-1}, r_i] contains r.
std::size_t locate_bin(const std::vector<double>& edges, double r) {
    auto it = std::lower_bound(edges.begin(), edges.end(), r);
    if (it == edges.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - edges.begin());
    return std::min(i - 1, edges.size() - 2);
}

}  // namespace

PotentialProfile build_potential_profile(const DensityVector& rho, const RadialGrid& grid,
                                         double G) {
    const std::size_t n = grid.bins();
    if (rho.values.size() != n)
        throw std::invalid_argument("build_potential_profile: density/grid size mismatch");

    PotentialProfile p;
    p.edges = grid.edges;
    p.G = G;
    p.mass_at_edges.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r0 = grid.edges[i], r1 = grid.edges[i + 1];
        p.mass_at_edges[i + 1] =
            p.mass_at_edges[i] + 4.0 * kPi / 3.0 * rho.values[i] * (r1 * r1 * r1 - r0 * r0 * r0);
    }
    p.total_mass = p.mass_at_edges[n];

    // Outer-shell contribution 2 pi G sum_{j>i} rho_j (r_j^2 - r_{j-1}^2),
    // accumulated from the outside in.
    std::vector<double> outer(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        const double r0 = grid.edges[i], r1 = grid.edges[i + 1];
        outer[i] = outer[i + 1] + 2.0 * kPi * G * rho.values[i] * (r1 * r1 - r0 * r0);
    }

    p.alpha.resize(n);
    p.beta.resize(n);
    p.gamma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r0 = grid.edges[i];
        p.alpha[i] = G * (p.mass_at_edges[i] - 4.0 * kPi / 3.0 * rho.values[i] * r0 * r0 * r0);
        p.beta[i] = 2.0 * kPi * G * rho.values[i] * grid.edges[i + 1] * grid.edges[i + 1] +
                    outer[i + 1];
        p.gamma[i] = -2.0 * kPi / 3.0 * G * rho.values[i];
    }
    p.phi_center = p.beta[0];

    p.phi_at_edges.assign(n + 1, 0.0);
    p.phi_at_edges[0] = p.phi_center;
    for (std::size_t i = 0; i < n; ++i)
        p.phi_at_edges[i + 1] = eval_bin(p, i, grid.edges[i + 1]);
    return p;
}

double enclosed_mass(const DensityVector& rho, const RadialGrid& grid, double r) {
    if (r < 0.0) throw std::domain_error("enclosed_mass: negative radius");
    if (rho.values.size() != grid.bins())
        throw std::invalid_argument("enclosed_mass: density/grid size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
        const double lo = std::min(r, grid.edges[i]);
        const double hi = std::min(r, grid.edges[i + 1]);
        m += rho.values[i] * (hi * hi * hi - lo * lo * lo);
    }
    return 4.0 * kPi / 3.0 * m;
}

double potential(const PotentialProfile& profile, double r) {
    if (r < 0.0) throw std::domain_error("potential: negative radius");
    if (r >= profile.outer_radius())
        return r > 0.0 ? profile.G * profile.total_mass / r : profile.phi_center;
    return eval_bin(profile, locate_bin(profile.edges, r), r);
}

double radius_of_potential(const PotentialProfile& profile, double phi_target) {
    const double phi_min = profile.phi_outer();
    const double phi_max = profile.phi_center;
    const double tol = 1e-10 * std::max(phi_max, 0.0);
    if (phi_target < phi_min - tol || phi_target > phi_max + tol)
        throw std::range_error("radius_of_potential: target outside [Phi(r_N), Phi(0)]");
    // Flat stretches of Phi can only sit at the centre (zero interior mass),
    // at value Phi(0), so returning 0 there picks the smallest radius.
    if (phi_target >= phi_max) return 0.0;
    if (phi_target <= phi_min) return profile.outer_radius();

    // First edge index k with Phi(r_k) <= target; the crossing lies in bin k-1.
    const auto& pe = profile.phi_at_edges;
    std::size_t lo_k = 0, hi_k = pe.size() - 1;
    while (lo_k < hi_k) {
        const std::size_t mid = (lo_k + hi_k) / 2;
        if (pe[mid] <= phi_target)
            hi_k = mid;
        else
            lo_k = mid + 1;
    }
    const std::size_t bin = lo_k - 1;  // lo_k >= 1 since pe[0] > target here

    double lo = profile.edges[bin], hi = profile.edges[bin + 1];
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (eval_bin(profile, bin, mid) > phi_target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double energy(const PotentialProfile& profile, const PhasePoint& p) {
    const double r = std::sqrt(p.x[0] * p.x[0] + p.x[1] * p.x[1] + p.x[2] * p.x[2]);
    const double v2 = p.v[0] * p.v[0] + p.v[1] * p.v[1] + p.v[2] * p.v[2];
    return 0.5 * v2 - potential(profile, r);
}

double df_integral(const DfVector& f, const EnergyGrid& egrid, double e_low) {
    if (f.values.size() != egrid.bins())
        throw std::invalid_argument("df_integral: df/grid size mismatch");
    if (e_low >= egrid.upper()) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        const double lo = std::max(e_low, egrid.edges[j]);
        const double width = egrid.edges[j + 1] - lo;
        if (width > 0.0) sum += f.values[j] * width;
    }
    return sum;
}

}  // namespace darkmass
