#include "darkmass/grids.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace darkmass {

namespace {

void require_strictly_increasing(const std::vector<double>& e, const char* what) {
    if (e.size() < 2)
        throw std::invalid_argument(std::string(what) + ": need at least two edges");
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!std::isfinite(e[i]))
            throw std::invalid_argument(std::string(what) + ": non-finite edge");
        if (i > 0 && !(e[i] > e[i - 1]))
            throw std::invalid_argument(std::string(what) + ": edges must be strictly increasing");
    }
}

// Index of the half-open bin (e[i], e[i+1]] containing x; clamps below e[0].
std::size_t half_open_bin(const std::vector<double>& edges, double x) {
    auto it = std::lower_bound(edges.begin(), edges.end(), x);  // first edge >= x
    if (it == edges.begin()) return 0;
    if (it == edges.end()) return edges.size() - 2;
    return static_cast<std::size_t>(it - edges.begin()) - 1;
}

}  // namespace

RadialGrid::RadialGrid(std::vector<double> e) : edges(std::move(e)) {
    require_strictly_increasing(edges, "RadialGrid");
    if (edges.front() != 0.0)
        throw std::invalid_argument("RadialGrid: innermost edge must be 0");
}

std::size_t RadialGrid::bin_index(double r) const {
    return half_open_bin(edges, r);
}

EnergyGrid::EnergyGrid(std::vector<double> e) : edges(std::move(e)) {
    require_strictly_increasing(edges, "EnergyGrid");
    if (edges.back() > 0.0)
        throw std::invalid_argument("EnergyGrid: edges must not exceed 0 (bound orbits)");
}

std::size_t EnergyGrid::bin_index(double e) const {
    return half_open_bin(edges, e);
}

bool non_negative(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0 && std::isfinite(x); });
}

bool non_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

bool satisfies_density_constraints(const DensityVector& rho) {
    return non_negative(rho.values) && non_increasing(rho.values);
}

}  // namespace darkmass
