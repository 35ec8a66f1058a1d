#include "darkmass/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace darkmass {

namespace {

// Half-open (lo, hi] assignment against explicit edges; values at or below
// the first edge land in bin 0.
std::size_t assign_bin(const std::vector<double>& edges, double x) {
    auto it = std::lower_bound(edges.begin(), edges.end(), x);
    if (it == edges.begin()) return 0;
    const std::size_t i = static_cast<std::size_t>(it - edges.begin());
    return std::min(i - 1, edges.size() - 2);
}

std::vector<double> equal_width_edges(double lo, double hi, std::size_t n) {
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

bool all_bins_occupied(const std::vector<double>& edges, const std::vector<double>& xs) {
    std::vector<int> hit(edges.size() - 1, 0);
    for (double x : xs) hit[assign_bin(edges, x)] = 1;
    return std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; });
}

// Largest n <= xs.size() whose equal-width bins on [lo, hi] are all occupied.
std::vector<double> maximal_equal_width_edges(double lo, double hi,
                                              const std::vector<double>& xs) {
    for (std::size_t n = xs.size(); n >= 1; --n) {
        auto edges = equal_width_edges(lo, hi, n);
        if (all_bins_occupied(edges, xs)) return edges;
    }
    return equal_width_edges(lo, hi, 1);  // unreachable: n = 1 always occupied
}

}  // namespace

RadialGrid choose_rp_bins(const ObservationSet& data) {
    if (data.empty()) throw std::invalid_argument("choose_rp_bins: empty data");
    std::vector<double> rp(data.size());
    for (std::size_t k = 0; k < data.size(); ++k) rp[k] = data[k].rp();
    const double rmax = *std::max_element(rp.begin(), rp.end());
    if (!(rmax > 0.0)) throw std::invalid_argument("choose_rp_bins: all projected radii are 0");
    return RadialGrid(maximal_equal_width_edges(0.0, rmax, rp));
}

EmpiricalPotential empirical_potential(const ObservationSet& data, const RadialGrid& grid,
                                       const UnitSystem& units, const BinningConfig& cfg) {
    const std::size_t n = grid.bins();
    std::vector<double> counts(n, 0.0);
    for (const auto& obs : data) counts[assign_bin(grid.edges, obs.rp())] += 1.0;

    EmpiricalPotential out;
    out.rho_emp.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (cfg.raw_counts) {
            out.rho_emp.values[i] = counts[i];
        } else {
            const double r0 = grid.edges[i], r1 = grid.edges[i + 1];
            const double shell = 4.0 * std::numbers::pi / 3.0 * (r1 * r1 * r1 - r0 * r0 * r0);
            out.rho_emp.values[i] = counts[i] / shell;
        }
    }
    // running minimum from the centre outward keeps the histogram a valid
    // (non-increasing) density
    for (std::size_t i = 1; i < n; ++i)
        out.rho_emp.values[i] = std::min(out.rho_emp.values[i], out.rho_emp.values[i - 1]);

    // smallest scale that binds every datum, with a safety margin; the
    // potential is linear in the density scale
    auto profile1 = build_potential_profile(out.rho_emp, grid, units.G);
    double c_min = 0.0;
    for (const auto& obs : data) {
        const double phi1 = potential(profile1, obs.rp());
        if (phi1 > 0.0) c_min = std::max(c_min, 0.5 * obs.v3 * obs.v3 / phi1);
    }
    out.scale_c = c_min > 0.0 ? cfg.scale_safety * c_min : 1.0;
    for (double& v : out.rho_emp.values) v *= out.scale_c;
    out.profile = build_potential_profile(out.rho_emp, grid, units.G);
    return out;
}

std::vector<double> empirical_energies(const ObservationSet& data,
                                       const EmpiricalPotential& emp) {
    std::vector<double> e(data.size());
    for (std::size_t k = 0; k < data.size(); ++k)
        e[k] = 0.5 * data[k].v3 * data[k].v3 - potential(emp.profile, data[k].rp());
    return e;
}

EnergyGrid choose_energy_bins(const std::vector<double>& energies) {
    if (energies.empty()) throw std::invalid_argument("choose_energy_bins: no energies");
    const double emin = *std::min_element(energies.begin(), energies.end());
    if (!(emin < 0.0))
        throw std::invalid_argument("choose_energy_bins: need at least one negative energy");
    return EnergyGrid(maximal_equal_width_edges(emin, 0.0, energies));
}

BinningResult bin_data(const ObservationSet& data, const UnitSystem& units,
                       const BinningConfig& cfg) {
    BinningResult out{choose_rp_bins(data), EnergyGrid({-1.0, 0.0}), {}, {}};
    out.emp = empirical_potential(data, out.rgrid, units, cfg);
    out.energies = empirical_energies(data, out.emp);
    out.egrid = choose_energy_bins(out.energies);
    return out;
}

}  // namespace darkmass
