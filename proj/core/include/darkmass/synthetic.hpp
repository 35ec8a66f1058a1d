#pragma once

#include <optional>
#include <vector>

#include "darkmass/grids.hpp"
#include "darkmass/model.hpp"
#include "darkmass/observation.hpp"
#include "darkmass/rng.hpp"

namespace darkmass {

enum class ModelKind { UniformSphere, Plummer };

/// Analytic ground-truth model for mock catalogs. `scale` is the Plummer
/// scale length a, or the outer radius R of the uniform sphere.
struct AnalyticModel {
    ModelKind kind = ModelKind::Plummer;
    double total_mass = 1.0;
    double scale = 1.0;
    double G = 1.0;
};

double model_density(const AnalyticModel& model, double r);
double model_potential(const AnalyticModel& model, double r);
double model_enclosed_mass(const AnalyticModel& model, double r);

/// Isotropic Plummer distribution function as a phase-space probability
/// density (integrates to 1 over all of phase space); zero for E >= 0.
double plummer_df_pdf(const AnalyticModel& model, double e);

/// Speed draw at radius r by rejection from p(v) ~ f(v^2/2 - Phi(r)) v^2 on
/// [0, v_esc]. Plummer only.
double sample_speed(Rng& rng, const AnalyticModel& model, double r);

struct SyntheticCatalog {
    ObservationSet observations;
    std::vector<PhasePoint> truth_points;  // full 6-d coordinates, noise-free
};

/// Mock catalog of n tracers: radius by inverse-CDF of M(r)/M_tot (numeric
/// bisection), isotropic position and velocity directions, speed by
/// rejection. Optional Gaussian noise on v3 (recorded per datum).
/// Plummer only; the uniform sphere has no closed-form isotropic df here.
SyntheticCatalog sample_catalog(Rng& rng, const AnalyticModel& model, int n,
                                std::optional<double> sigma_v3 = std::nullopt);

/// Shell-averaged density per radial bin (enclosed-mass differences over
/// shell volumes): what a piecewise-constant fit should recover.
std::vector<double> truth_binned_density(const AnalyticModel& model, const RadialGrid& grid);

/// Bin averages of the Plummer df over each energy bin (zero below the
/// potential floor).
std::vector<double> truth_binned_df(const AnalyticModel& model, const EnergyGrid& egrid);

}  // namespace darkmass
