#pragma once

#include <vector>

#include "darkmass/grids.hpp"
#include "darkmass/model.hpp"
#include "darkmass/observation.hpp"
#include "darkmass/units.hpp"

namespace darkmass {

struct BinningConfig {
    bool raw_counts = false;     // skip the shell-volume normalization
    double scale_safety = 1.1;   // margin on the histogram scale c
};

/// Equal-width bins on (0, max rp]; the largest bin count <= N_data that
/// leaves no bin empty, found by exhaustive descent.
RadialGrid choose_rp_bins(const ObservationSet& data);

/// Scaled R_p histogram standing in for the mass density: counts are
/// shell-volume normalized (unless raw_counts), monotonized by a running
/// minimum outward, and scaled by the smallest c (times the safety margin)
/// that makes every datum bound under the resulting potential.
struct EmpiricalPotential {
    DensityVector rho_emp;
    PotentialProfile profile;
    double scale_c = 1.0;
};

EmpiricalPotential empirical_potential(const ObservationSet& data, const RadialGrid& grid,
                                       const UnitSystem& units, const BinningConfig& cfg = {});

/// E_k = v3_k^2 / 2 - Phi_emp(rp_k): observed coordinates only, so kinetic
/// energy is deliberately underestimated.
std::vector<double> empirical_energies(const ObservationSet& data,
                                       const EmpiricalPotential& emp);

/// Equal-width bins on [min E, 0]; maximal count with every bin occupied.
EnergyGrid choose_energy_bins(const std::vector<double>& energies);

struct BinningResult {
    RadialGrid rgrid;
    EnergyGrid egrid;
    std::vector<double> energies;
    EmpiricalPotential emp;
};

BinningResult bin_data(const ObservationSet& data, const UnitSystem& units,
                       const BinningConfig& cfg = {});

}  // namespace darkmass
