#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "darkmass/binning.hpp"
#include "darkmass/inference.hpp"
#include "darkmass/projection.hpp"

namespace darkmass {

/// Invalid configuration: reported before any compute starts (exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Everything a run needs, resolved from a flat key=value file. The resolved
/// values are serialized next to the outputs for reproducibility.
struct RunConfig {
    std::string catalog;
    std::string output_dir = "darkmass_out";
    bool code_units = false;

    std::uint64_t n_iter = 200000;
    std::uint64_t burn_in = 50000;
    std::uint64_t thin = 50;
    std::uint64_t seed = 20240817;
    int chains = 2;

    int gl_order = 16;
    int gh_nodes = 11;
    bool convolve_errors = false;

    bool adapt = true;
    double adapt_target = 0.234;
    bool raw_counts = false;

    double rho_prior_sd_factor = 10.0;
    double f_prior_sd_factor = 10.0;
    double rho_step_factor = 0.1;
    double f_step_factor = 0.1;
    double hpd_mass = 0.95;

    int likelihood_threads = 1;
};

RunConfig parse_config_file(const std::string& path);
void validate_config(const RunConfig& cfg);

/// Worker cap from DARKMASS_THREADS (0 = unlimited / hardware).
int thread_cap();

/// Default priors and proposal scales derived from the binning stage.
PriorSpec default_priors(const BinningResult& binning, const RunConfig& cfg);
ProposalSpec default_proposal(const PriorSpec& prior, const RunConfig& cfg);

/// Full run: load, bin, sample (chains in parallel), summarize, emit
/// chain_<k>.csv, summary.json, grids.json, config_resolved.json,
/// hpd_plot.svg and per-parameter traces. Returns 0 on success; stage
/// failures leave a FAILED marker beside any partial artifacts and return 1.
int run_pipeline(const RunConfig& cfg);

/// Recomputes summary.json (and the HPD plot) from chain_<k>.csv plus
/// grids.json in an existing output directory.
int summarize_directory(const std::string& dir, double hpd_mass);

}  // namespace darkmass
