#include "darkmass/normal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "darkmass/rng.hpp"

namespace darkmass::math {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))
constexpr double kInf = std::numeric_limits<double>::infinity();

// Mills ratio P(Z > z) / phi(z) by continued fraction; good for z >= 4.
double mills_ratio(double z) {
    double r = 0.0;
    for (int k = 60; k >= 1; --k) r = k / (z + r);
    return 1.0 / (z + r);
}

}  // namespace

double normal_logpdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - kLogSqrt2Pi - std::log(sd);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double log_normal_sf(double z) {
    if (z == -kInf) return 0.0;
    if (z == kInf) return -kInf;
    if (z < 8.0) return std::log(normal_sf(z));
    return -0.5 * z * z - kLogSqrt2Pi + std::log(mills_ratio(z));
}

double normal_quantile(double p) {
    // Wichura's algorithm AS 241 (PPND16).
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        z = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -z : z;
}

double normal_quantile_from_log_sf(double log_sf) {
    if (log_sf >= -690.0) {
        // survival probability still representable
        return -normal_quantile(std::exp(log_sf));
    }
    // Asymptotic start from sf(z) ~ phi(z)/z, then Newton on log sf.
    double z = std::sqrt(-2.0 * (log_sf + kLogSqrt2Pi));
    for (int it = 0; it < 60; ++it) {
        const double g = log_normal_sf(z) - log_sf;
        const double step = g * mills_ratio(z);  // d(log sf)/dz = -1/mills
        z += step;
        if (std::abs(step) <= 1e-14 * z) break;
    }
    return z;
}

}  // namespace darkmass::math

namespace darkmass {

double truncnorm_logpdf(double x, double mean, double sd, double lower) {
    if (x < lower) return -std::numeric_limits<double>::infinity();
    double lp = math::normal_logpdf(x, mean, sd);
    if (lower > -std::numeric_limits<double>::infinity())
        lp -= math::log_normal_sf((lower - mean) / sd);
    return lp;
}

double truncnorm_sample(Rng& rng, double mean, double sd, double lower) {
    const double u = rng.uniform();
    if (!(lower > -std::numeric_limits<double>::infinity()))
        return mean + sd * math::normal_quantile(u);
    const double alpha = (lower - mean) / sd;
    // Map u through the survival function so far-tail truncations stay exact:
    // sf(z) = sf(alpha) * (1 - u).
    const double log_sf_z = math::log_normal_sf(alpha) + std::log1p(-u);
    double z;
    if (log_sf_z > -690.0)
        z = -math::normal_quantile(std::exp(log_sf_z));
    else
        z = math::normal_quantile_from_log_sf(log_sf_z);
    const double x = mean + sd * z;
    return x < lower ? lower : x;
}

}  // namespace darkmass
