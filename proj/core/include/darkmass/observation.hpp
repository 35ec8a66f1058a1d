#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace darkmass {

/// One tracer: sky-plane position (x1, x2) and line-of-sight velocity v3,
/// with an optional per-datum velocity error scale.
struct Observation {
    double x1 = 0.0;
    double x2 = 0.0;
    double v3 = 0.0;
    std::optional<double> sigma_v3;

    /// Projected radius on the sky plane.
    double rp() const { return std::hypot(x1, x2); }
};

using ObservationSet = std::vector<Observation>;

}  // namespace darkmass
