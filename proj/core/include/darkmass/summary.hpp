#pragma once

#include <string>
#include <vector>

#include "darkmass/grids.hpp"
#include "darkmass/inference.hpp"

namespace darkmass {

struct HpdInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Shortest contiguous interval covering ceil(mass * n) sorted samples;
/// ties resolve to the smallest lower endpoint. Needs >= 20 samples.
HpdInterval hpd_interval(std::vector<double> samples, double mass);

/// Midpoint of the fullest histogram bin at Freedman-Diaconis width; ties
/// resolve to the smallest midpoint, and a degenerate IQR falls back to the
/// most frequent value. Needs >= 20 samples.
double marginal_mode(std::vector<double> samples);

/// Initial-positive-sequence autocorrelation estimate, clamped to [1, n].
double effective_sample_size(const std::vector<double>& x);

/// Potential scale reduction over >= 2 chains of one parameter (chains are
/// truncated to the shortest length).
double gelman_rubin(const std::vector<std::vector<double>>& per_chain);

struct ParameterSummary {
    std::string name;
    double hpd_lower = 0.0, hpd_upper = 0.0;
    double mode = 0.0;
    double mean = 0.0;
    double ess = 0.0;
    double rhat = 0.0;  // 0 when undefined (single chain)
};

struct SummaryTable {
    std::vector<ParameterSummary> parameters;  // rho block then f block
    double hpd_mass = 0.95;
    std::size_t n_rho = 0, n_f = 0;
    std::size_t n_samples = 0;
    std::size_t n_chains = 0;
    // sample with the highest stored log-posterior
    std::vector<double> map_rho, map_f;
    double map_log_post = 0.0;
    // derived 4/3 pi rho_1 r_1^3 for the innermost bin
    ParameterSummary enclosed_mass;
    std::vector<std::string> warnings;
};

/// Per-sample innermost-bin mass 4 pi rho_1 r_1^3 / 3 summarized over the
/// chain (HPD and mode of the derived samples, not of rho_1's endpoints).
ParameterSummary enclosed_mass_summary(const std::vector<ChainSample>& samples,
                                       const RadialGrid& grid, double hpd_mass);

/// Joint summary over pooled chains, with per-chain split diagnostics.
SummaryTable summarize_chains(const std::vector<Chain>& chains, const RadialGrid& grid,
                              double hpd_mass);

}  // namespace darkmass
