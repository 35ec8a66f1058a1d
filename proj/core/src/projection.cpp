#include "darkmass/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "darkmass/quadrature.hpp"

namespace darkmass {

namespace {

constexpr double kPi = std::numbers::pi;

// Accumulate per-bin overlaps of [e_low, 0] with the energy bins, scaled by
// wt: row_j += wt * |bin_j  intersect  [max(e_low, E_0), E_N]|.
void add_overlaps(const EnergyGrid& egrid, double e_low, double wt, std::vector<double>& row) {
    const auto& E = egrid.edges;
    if (e_low >= E.back()) return;
    const double e = std::max(e_low, E.front());
    // first edge strictly above e; bin j-1 is partial, the rest are full
    std::size_t j = static_cast<std::size_t>(std::upper_bound(E.begin(), E.end(), e) - E.begin());
    if (j == 0) j = 1;
    row[j - 1] += wt * (E[j] - e);
    for (std::size_t k = j; k + 1 < E.size(); ++k) row[k] += wt * (E[k + 1] - E[k]);
}

// x3 values (ascending, deduplicated) where the integrand changes piece.
std::vector<double> los_breakpoints(const PotentialProfile& profile, const EnergyGrid& egrid,
                                    const RadialGrid& grid, double rp, double v3, double los_max) {
    std::vector<double> pts{0.0, los_max};
    const double rp2 = rp * rp;
    for (std::size_t i = 1; i + 1 < grid.edges.size(); ++i) {
        const double re = grid.edges[i];
        if (re > rp && re < grid.outer_radius())
            pts.push_back(std::sqrt(re * re - rp2));
    }
    const double half_v3sq = 0.5 * v3 * v3;
    for (double edge : egrid.edges) {
        const double target = half_v3sq - edge;
        if (target < profile.phi_outer() || target > profile.phi_center) continue;
        const double rc = radius_of_potential(profile, target);
        if (rc > rp && rc < grid.outer_radius()) pts.push_back(std::sqrt(rc * rc - rp2));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double a, double b) { return b - a < 1e-14 * (1.0 + los_max); }),
              pts.end());
    return pts;
}

}  // namespace

double inner_velocity_integral(const PotentialProfile& profile, const DfVector& f,
                               const EnergyGrid& egrid, double r, double v3) {
    const double phi = potential(profile, r);
    const double e_low = 0.5 * v3 * v3 - phi;
    if (e_low >= 0.0) return 0.0;
    return 2.0 * kPi * df_integral(f, egrid, e_low);
}

std::vector<double> los_energy_row(const PotentialProfile& profile, const EnergyGrid& egrid,
                                   const RadialGrid& grid, double rp, double v3,
                                   const ProjectionConfig& cfg) {
    std::vector<double> row(egrid.bins(), 0.0);
    const double r_out = grid.outer_radius();
    if (rp >= r_out) return row;
    // Phi peaks at x3 = 0 along the line of sight, so this cut empties it.
    const double half_v3sq = 0.5 * v3 * v3;
    if (half_v3sq >= potential(profile, rp)) return row;

    const double los_max = std::sqrt(r_out * r_out - rp * rp);
    const auto pts = los_breakpoints(profile, egrid, grid, rp, v3, los_max);
    const auto& gl = math::gauss_legendre(cfg.gl_order);

    const double rp2 = rp * rp;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const double mid = 0.5 * (pts[s] + pts[s + 1]);
        const double half = 0.5 * (pts[s + 1] - pts[s]);
        if (!(half > 0.0)) continue;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double x3 = mid + half * gl.x[q];
            const double r = std::sqrt(rp2 + x3 * x3);
            const double e_low = half_v3sq - potential(profile, r);
            // weight folds the quadrature scale, the +-x3 symmetry factor 2
            // and the velocity-plane factor 2 pi
            add_overlaps(egrid, e_low, 4.0 * kPi * half * gl.w[q], row);
        }
    }
    return row;
}

double project_pdf_unnorm(const PotentialProfile& profile, const DfVector& f,
                          const EnergyGrid& egrid, const RadialGrid& grid, double rp, double v3,
                          const ProjectionConfig& cfg) {
    if (rp < 0.0) throw std::domain_error("project_pdf_unnorm: negative projected radius");
    const auto row = los_energy_row(profile, egrid, grid, rp, v3, cfg);
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * f.values[j];
    return sum;
}

std::vector<double> dos_weights(const PotentialProfile& profile, const EnergyGrid& egrid,
                                const RadialGrid& grid, const ProjectionConfig& cfg) {
    const std::size_t ne = egrid.bins();
    std::vector<double> w(ne, 0.0);
    const double phi0 = profile.phi_center;
    const double phi_out = profile.phi_outer();
    if (!(phi0 > 0.0)) return w;  // no mass, no bound states
    const auto& gl = math::gauss_legendre(cfg.gl_order);

    // integral over r in [0, r_max] of r^2 sqrt(2 (E + Phi(r))), split at the
    // radial edges; `turning` marks r_max as the zero of the integrand, where
    // the sqrt is regularized by the substitution r = r_max - u^2.
    const auto radial_integral = [&](double e, double r_max, bool turning) {
        double acc = 0.0;
        double lo = 0.0;
        for (std::size_t i = 1; i < profile.edges.size() && lo < r_max; ++i) {
            const double hi = std::min(profile.edges[i], r_max);
            if (!(hi > lo)) continue;
            const bool last_piece = turning && hi == r_max;
            if (last_piece) {
                const double umax = std::sqrt(hi - lo);
                acc += math::gl_integrate(gl, 0.0, umax, [&](double u) {
                    const double r = hi - u * u;
                    const double s = std::max(0.0, 2.0 * (e + potential(profile, r)));
                    return 2.0 * u * r * r * std::sqrt(s);
                });
            } else {
                acc += math::gl_integrate(gl, lo, hi, [&](double r) {
                    const double s = std::max(0.0, 2.0 * (e + potential(profile, r)));
                    return r * r * std::sqrt(s);
                });
            }
            lo = hi;
        }
        return acc;
    };

    for (std::size_t j = 0; j < ne; ++j) {
        const double e_hi = egrid.edges[j + 1];
        double e_lo = std::max(egrid.edges[j], -phi0);
        if (!(e_hi > e_lo)) continue;  // bin entirely below the potential floor
        // kink where the bound region stops being truncated by the grid edge
        std::vector<double> esplit{e_lo, e_hi};
        if (-phi_out > e_lo && -phi_out < e_hi) esplit.insert(esplit.begin() + 1, -phi_out);
        double acc = 0.0;
        for (std::size_t s = 0; s + 1 < esplit.size(); ++s) {
            acc += math::gl_integrate(gl, esplit[s], esplit[s + 1], [&](double e) {
                const bool turning = -e > phi_out;
                const double r_max =
                    turning ? radius_of_potential(profile, -e) : grid.outer_radius();
                return radial_integral(e, r_max, turning);
            });
        }
        w[j] = 16.0 * kPi * kPi * acc;
    }
    return w;
}

double phase_space_norm(const DfVector& f, const std::vector<double>& weights) {
    double n = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) n += f.values[j] * weights[j];
    return n;
}

double project_pdf(const PotentialProfile& profile, const DfVector& f, const EnergyGrid& egrid,
                   const RadialGrid& grid, const Observation& obs, const ProjectionConfig& cfg) {
    const auto w = dos_weights(profile, egrid, grid, cfg);
    const double norm = phase_space_norm(f, w);
    if (!(norm > 0.0))
        throw std::domain_error("project_pdf: degenerate model (zero phase-space norm)");
    const double rp = obs.rp();
    if (cfg.convolve_errors && obs.sigma_v3 && *obs.sigma_v3 > 0.0) {
        const auto& gh = math::gauss_hermite(cfg.gh_nodes);
        const double scale = std::numbers::sqrt2 * *obs.sigma_v3;
        double acc = 0.0;
        for (std::size_t i = 0; i < gh.x.size(); ++i)
            acc += gh.w[i] * project_pdf_unnorm(profile, f, egrid, grid, rp,
                                                obs.v3 + scale * gh.x[i], cfg);
        return acc / (std::sqrt(kPi) * norm);
    }
    return project_pdf_unnorm(profile, f, egrid, grid, rp, obs.v3, cfg) / norm;
}

}  // namespace darkmass
