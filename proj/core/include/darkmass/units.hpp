#pragma once

namespace darkmass {

/// Newton's constant in kpc (km/s)^2 / Msun.
inline constexpr double kGravityAstro = 4.300917270e-6;

/// Unit system used throughout: astronomical (kpc, km/s, Msun) or
/// dimensionless code units with G = 1.
struct UnitSystem {
    double G = kGravityAstro;

    static UnitSystem astro() { return UnitSystem{kGravityAstro}; }
    static UnitSystem code() { return UnitSystem{1.0}; }
};

}  // namespace darkmass
