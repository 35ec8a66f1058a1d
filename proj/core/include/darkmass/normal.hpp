#pragma once

namespace darkmass {
class Rng;
}

namespace darkmass::math {

double normal_logpdf(double x, double mean, double sd);

/// Standard normal CDF and survival function.
double normal_cdf(double z);
double normal_sf(double z);

/// log P(Z > z), accurate far into the upper tail.
double log_normal_sf(double z);

/// Inverse standard normal CDF (Wichura's PPND16); p in (0, 1).
double normal_quantile(double p);

/// z such that log P(Z > z) = log_sf, including values far past double
/// underflow of the survival function itself.
double normal_quantile_from_log_sf(double log_sf);

}  // namespace darkmass::math

namespace darkmass {

/// log density of Normal(mean, sd^2) conditioned on x >= lower;
/// lower may be -infinity, recovering the plain normal.
double truncnorm_logpdf(double x, double mean, double sd, double lower);

/// Inverse-CDF draw from the left-truncated normal.
double truncnorm_sample(Rng& rng, double mean, double sd, double lower);

}  // namespace darkmass
