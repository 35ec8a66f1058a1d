#pragma once

#include <cstddef>
#include <vector>

namespace darkmass {

/// Radial bin edges r_0 < r_1 < ... < r_N with r_0 = 0.
/// Bins are half-open (r_{i-1}, r_i]; a value at an edge belongs to the
/// lower bin, and values at or below r_0 fall into bin 0.
struct RadialGrid {
    std::vector<double> edges;

    explicit RadialGrid(std::vector<double> e);

    std::size_t bins() const { return edges.size() - 1; }
    double outer_radius() const { return edges.back(); }
    std::size_t bin_index(double r) const;
};

/// Energy bin edges E_0 < E_1 < ... < E_N <= 0 (bound orbits only).
/// Same half-open (lo, hi] convention as RadialGrid.
struct EnergyGrid {
    std::vector<double> edges;

    explicit EnergyGrid(std::vector<double> e);

    std::size_t bins() const { return edges.size() - 1; }
    double lower() const { return edges.front(); }
    double upper() const { return edges.back(); }
    std::size_t bin_index(double e) const;
};

/// Piecewise-constant gravitational mass density aligned to a RadialGrid.
/// Valid samples are non-negative and non-increasing outward; the
/// constraints are checked per use, not enforced at construction.
struct DensityVector {
    std::vector<double> values;
};

/// Piecewise-constant phase-space density aligned to an EnergyGrid;
/// identically zero outside the grid's energy range.
struct DfVector {
    std::vector<double> values;
};

bool non_negative(const std::vector<double>& v);
bool non_increasing(const std::vector<double>& v);

/// rho_i >= rho_{i+1} >= 0 for every bin.
bool satisfies_density_constraints(const DensityVector& rho);

}  // namespace darkmass
