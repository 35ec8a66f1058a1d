#pragma once

#include <cstdint>
#include <random>

#include "darkmass/normal.hpp"

namespace darkmass {

/// Deterministic random stream. All variates are derived from raw
/// mt19937_64 output through fixed arithmetic, so a seed reproduces the
/// same chain bit-for-bit on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via the inverse CDF.
    double normal() { return math::normal_quantile(uniform()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace darkmass
