#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "darkmass/grids.hpp"
#include "darkmass/observation.hpp"
#include "darkmass/projection.hpp"
#include "darkmass/rng.hpp"

namespace darkmass {

/// Independent Gaussian priors: per-bin means for rho, one shared mean for f,
/// restricted to the constraint set (non-negativity, rho monotone outward).
struct PriorSpec {
    std::vector<double> rho_seeds;
    std::vector<double> rho_prior_sd;  // per bin
    double f_seed = 1.0;
    double f_prior_sd = 10.0;
};

/// Random-walk scales for the two blocks, with optional burn-in adaptation.
struct ProposalSpec {
    std::vector<double> rho_step_sd;  // distinct per radial bin
    double f_step_sd = 1.0;
    bool adapt = true;
    double adapt_target = 0.234;
    std::uint64_t adapt_interval = 100;
};

struct ChainSample {
    std::uint64_t iteration = 0;
    std::vector<double> rho, f;
    double log_post = 0.0;
};

struct Chain {
    std::vector<ChainSample> samples;
    std::uint64_t seed = 0;
    std::uint64_t n_iter = 0, burn_in = 0, thin = 1;
    std::uint64_t rho_proposals = 0, rho_accepts = 0;
    std::uint64_t f_proposals = 0, f_accepts = 0;
    std::size_t n_rho = 0, n_f = 0;
    std::vector<double> final_rho_step_sd;  // frozen at the end of burn-in
    double final_f_step_sd = 0.0;

    double rho_acceptance() const {
        return rho_proposals ? double(rho_accepts) / double(rho_proposals) : 0.0;
    }
    double f_acceptance() const {
        return f_proposals ? double(f_accepts) / double(f_proposals) : 0.0;
    }
};

/// Likelihood abstraction: `prepare` caches everything that depends on rho
/// alone (potential, density-of-states weights, per-datum line-of-sight
/// rows); `eval` is then cheap in f. Tests inject flat stand-ins.
struct LikelihoodContextBase {
    virtual ~LikelihoodContextBase() = default;
};

class LikelihoodModel {
public:
    virtual ~LikelihoodModel() = default;
    virtual std::shared_ptr<const LikelihoodContextBase> prepare(const DensityVector& rho) const = 0;
    virtual double eval(const LikelihoodContextBase& ctx, const DfVector& f) const = 0;
};

/// The projected-pdf likelihood over an observation set.
class ProjectedPdfLikelihood : public LikelihoodModel {
public:
    ProjectedPdfLikelihood(RadialGrid grid, EnergyGrid egrid, ObservationSet data,
                           ProjectionConfig cfg, double G, int n_threads = 1);

    std::shared_ptr<const LikelihoodContextBase> prepare(const DensityVector& rho) const override;
    double eval(const LikelihoodContextBase& ctx, const DfVector& f) const override;

private:
    RadialGrid grid_;
    EnergyGrid egrid_;
    ObservationSet data_;
    ProjectionConfig cfg_;
    double G_;
    int n_threads_;
};

/// ll(rho, f) is identically 0: the posterior reduces to the constrained
/// prior. Used by the sampler-correctness checks.
class FlatLikelihood : public LikelihoodModel {
public:
    std::shared_ptr<const LikelihoodContextBase> prepare(const DensityVector&) const override;
    double eval(const LikelihoodContextBase&, const DfVector&) const override;
};

/// Sum of logs in index order; -inf as soon as any term is <= 0.
double sum_log_terms(const std::vector<double>& values);

/// log of Eq.-style likelihood: sum_k log nu(y_k); -inf when any datum has
/// zero density or the model is degenerate. Empty data is a usage error.
double log_likelihood(const DensityVector& rho, const DfVector& f, const RadialGrid& grid,
                      const EnergyGrid& egrid, const ObservationSet& data,
                      const ProjectionConfig& cfg, double G);

double log_prior(const DensityVector& rho, const DfVector& f, const PriorSpec& spec);

struct BlockProposal {
    std::vector<double> values;
    double log_q_forward = 0.0;
    double log_q_reverse = 0.0;
};

/// Truncated-normal proposal for the density block, built in descending bin
/// order so that each component is left-truncated at its just-proposed outer
/// neighbour (at 0 for the outermost). The reverse density uses the current
/// state's truncation points, mirroring the same construction.
BlockProposal propose_rho_block(Rng& rng, const std::vector<double>& rho,
                                const ProposalSpec& spec);

/// Independent left-truncated (at 0) normal proposals for the f block.
BlockProposal propose_f_block(Rng& rng, const std::vector<double>& f, const ProposalSpec& spec);

struct ChainState {
    DensityVector rho;
    DfVector f;
    double log_post = 0.0;
    std::shared_ptr<const LikelihoodContextBase> ctx;
};

struct BlockCounters {
    std::uint64_t rho_proposals = 0, rho_accepts = 0;
    std::uint64_t f_proposals = 0, f_accepts = 0;
};

ChainState make_initial_state(const DensityVector& rho, const DfVector& f,
                              const LikelihoodModel& like, const PriorSpec& prior);

/// One sweep: rho block first, then the f block at the (possibly updated)
/// rho. Each block is a joint Metropolis-Hastings decision.
void gibbs_iteration(Rng& rng, ChainState& state, const LikelihoodModel& like,
                     const PriorSpec& prior, const ProposalSpec& proposal,
                     BlockCounters& counters);

struct ChainControl {
    std::uint64_t n_iter = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t thin = 1;
};

/// Runs the two-block sampler. During burn-in, when adaptation is on, each
/// block's step scales are nudged by exp(+-0.01) toward the target
/// acceptance every adapt_interval iterations, then frozen. Deterministic
/// for a given seed.
Chain run_chain(std::uint64_t seed, const DensityVector& init_rho, const DfVector& init_f,
                const LikelihoodModel& like, const PriorSpec& prior, ProposalSpec proposal,
                const ChainControl& ctrl);

}  // namespace darkmass
