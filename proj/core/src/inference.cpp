#include "darkmass/inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "darkmass/normal.hpp"
#include "darkmass/quadrature.hpp"

namespace darkmass {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ProjectedContext : LikelihoodContextBase {
    PotentialProfile profile;
    std::vector<double> dos_w;
    std::vector<double> rows;  // n_data x n_e, row-major
    std::size_t ne = 0;
};

}  // namespace

ProjectedPdfLikelihood::ProjectedPdfLikelihood(RadialGrid grid, EnergyGrid egrid,
                                               ObservationSet data, ProjectionConfig cfg,
                                               double G, int n_threads)
    : grid_(std::move(grid)),
      egrid_(std::move(egrid)),
      data_(std::move(data)),
      cfg_(cfg),
      G_(G),
      n_threads_(n_threads < 1 ? 1 : n_threads) {
    if (data_.empty()) throw std::invalid_argument("ProjectedPdfLikelihood: empty data");
}

std::shared_ptr<const LikelihoodContextBase> ProjectedPdfLikelihood::prepare(
    const DensityVector& rho) const {
    auto ctx = std::make_shared<ProjectedContext>();
    ctx->profile = build_potential_profile(rho, grid_, G_);
    ctx->dos_w = dos_weights(ctx->profile, egrid_, grid_, cfg_);
    ctx->ne = egrid_.bins();
    ctx->rows.assign(data_.size() * ctx->ne, 0.0);

    const auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const Observation& obs = data_[k];
            // The bin selection puts its outermost datum exactly on the outer
            // edge, where the projected pdf vanishes identically. Treat the
            // radial support as the closed disk: edge data are evaluated in
            // the inward-limit sense (the offset this introduces is the same
            // at every parameter value, so posteriors are unaffected).
            double rp = obs.rp();
            if (rp == grid_.outer_radius()) rp = std::nextafter(rp, 0.0);
            std::vector<double> row;
            if (cfg_.convolve_errors && obs.sigma_v3 && *obs.sigma_v3 > 0.0) {
                const auto& gh = math::gauss_hermite(cfg_.gh_nodes);
                const double scale = std::numbers::sqrt2 * *obs.sigma_v3;
                const double wnorm = 1.0 / std::sqrt(std::numbers::pi);
                row.assign(ctx->ne, 0.0);
                for (std::size_t i = 0; i < gh.x.size(); ++i) {
                    const auto part = los_energy_row(ctx->profile, egrid_, grid_, rp,
                                                     obs.v3 + scale * gh.x[i], cfg_);
                    for (std::size_t j = 0; j < ctx->ne; ++j)
                        row[j] += wnorm * gh.w[i] * part[j];
                }
            } else {
                row = los_energy_row(ctx->profile, egrid_, grid_, rp, obs.v3, cfg_);
            }
            std::copy(row.begin(), row.end(), ctx->rows.begin() + k * ctx->ne);
        }
    };

    const std::size_t n = data_.size();
    const std::size_t workers = std::min<std::size_t>(n_threads_, n);
    if (workers <= 1) {
        fill(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk, e = std::min(n, b + chunk);
            if (b < e) pool.emplace_back(fill, b, e);
        }
        for (auto& t : pool) t.join();
    }
    return ctx;
}

double ProjectedPdfLikelihood::eval(const LikelihoodContextBase& base, const DfVector& f) const {
    const auto& ctx = static_cast<const ProjectedContext&>(base);
    const double norm = phase_space_norm(f, ctx.dos_w);
    if (!(norm > 0.0)) return kNegInf;
    double sum = 0.0;
    const std::size_t ne = ctx.ne;
    for (std::size_t k = 0; k < data_.size(); ++k) {
        double nu = 0.0;
        const double* row = ctx.rows.data() + k * ne;
        for (std::size_t j = 0; j < ne; ++j) nu += row[j] * f.values[j];
        if (!(nu > 0.0)) return kNegInf;
        sum += std::log(nu);
    }
    return sum - static_cast<double>(data_.size()) * std::log(norm);
}

std::shared_ptr<const LikelihoodContextBase> FlatLikelihood::prepare(const DensityVector&) const {
    return std::make_shared<LikelihoodContextBase>();
}

double FlatLikelihood::eval(const LikelihoodContextBase&, const DfVector&) const {
    return 0.0;
}

double sum_log_terms(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) return kNegInf;
        s += std::log(v);
    }
    return s;
}

double log_likelihood(const DensityVector& rho, const DfVector& f, const RadialGrid& grid,
                      const EnergyGrid& egrid, const ObservationSet& data,
                      const ProjectionConfig& cfg, double G) {
    if (data.empty()) throw std::invalid_argument("log_likelihood: empty data");
    ProjectedPdfLikelihood like(grid, egrid, data, cfg, G);
    const auto ctx = like.prepare(rho);
    return like.eval(*ctx, f);
}

double log_prior(const DensityVector& rho, const DfVector& f, const PriorSpec& spec) {
    if (rho.values.size() != spec.rho_seeds.size() ||
        rho.values.size() != spec.rho_prior_sd.size())
        throw std::invalid_argument("log_prior: rho/prior size mismatch");
    if (!satisfies_density_constraints(rho) || !non_negative(f.values)) return kNegInf;
    double s = 0.0;
    for (std::size_t i = 0; i < rho.values.size(); ++i)
        s += math::normal_logpdf(rho.values[i], spec.rho_seeds[i], spec.rho_prior_sd[i]);
    for (double fj : f.values) s += math::normal_logpdf(fj, spec.f_seed, spec.f_prior_sd);
    return s;
}

BlockProposal propose_rho_block(Rng& rng, const std::vector<double>& rho,
                                const ProposalSpec& spec) {
    const std::size_t n = rho.size();
    BlockProposal out;
    out.values.resize(n);
    for (std::size_t k = n; k-- > 0;) {
        const double sd = spec.rho_step_sd[k];
        const double lower_fwd = (k + 1 == n) ? 0.0 : out.values[k + 1];
        out.values[k] = truncnorm_sample(rng, rho[k], sd, lower_fwd);
        out.log_q_forward += truncnorm_logpdf(out.values[k], rho[k], sd, lower_fwd);
        const double lower_rev = (k + 1 == n) ? 0.0 : rho[k + 1];
        out.log_q_reverse += truncnorm_logpdf(rho[k], out.values[k], sd, lower_rev);
    }
    return out;
}

BlockProposal propose_f_block(Rng& rng, const std::vector<double>& f, const ProposalSpec& spec) {
    BlockProposal out;
    out.values.resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        out.values[j] = truncnorm_sample(rng, f[j], spec.f_step_sd, 0.0);
        out.log_q_forward += truncnorm_logpdf(out.values[j], f[j], spec.f_step_sd, 0.0);
        out.log_q_reverse += truncnorm_logpdf(f[j], out.values[j], spec.f_step_sd, 0.0);
    }
    return out;
}

ChainState make_initial_state(const DensityVector& rho, const DfVector& f,
                              const LikelihoodModel& like, const PriorSpec& prior) {
    if (!satisfies_density_constraints(rho) || !non_negative(f.values))
        throw std::invalid_argument("initial state violates the support constraints");
    ChainState st;
    st.rho = rho;
    st.f = f;
    st.ctx = like.prepare(rho);
    st.log_post = like.eval(*st.ctx, f) + log_prior(rho, f, prior);
    return st;
}

namespace {

// min(0, delta) Metropolis-Hastings decision; one uniform per call, and the
// -inf cases never reach the (ill-defined) difference.
bool accept_move(Rng& rng, double log_post_new, double log_post_old, double log_q_fwd,
                 double log_q_rev) {
    const double u = rng.uniform();
    if (log_post_new == kNegInf) return false;
    if (log_post_old == kNegInf) return true;
    const double log_alpha = log_post_new - log_post_old + log_q_rev - log_q_fwd;
    return log_alpha >= 0.0 || std::log(u) < log_alpha;
}

}  // namespace

void gibbs_iteration(Rng& rng, ChainState& state, const LikelihoodModel& like,
                     const PriorSpec& prior, const ProposalSpec& proposal,
                     BlockCounters& counters) {
    // Block 1: density parameters (rebuilds the potential-dependent cache).
    {
        BlockProposal prop = propose_rho_block(rng, state.rho.values, proposal);
        DensityVector rho_new{prop.values};
        auto ctx_new = like.prepare(rho_new);
        const double lp_new = like.eval(*ctx_new, state.f) + log_prior(rho_new, state.f, prior);
        ++counters.rho_proposals;
        if (accept_move(rng, lp_new, state.log_post, prop.log_q_forward, prop.log_q_reverse)) {
            state.rho = std::move(rho_new);
            state.ctx = std::move(ctx_new);
            state.log_post = lp_new;
            ++counters.rho_accepts;
        }
    }
    // Block 2: distribution-function parameters at the updated density.
    {
        BlockProposal prop = propose_f_block(rng, state.f.values, proposal);
        DfVector f_new{prop.values};
        const double lp_new = like.eval(*state.ctx, f_new) + log_prior(state.rho, f_new, prior);
        ++counters.f_proposals;
        if (accept_move(rng, lp_new, state.log_post, prop.log_q_forward, prop.log_q_reverse)) {
            state.f = std::move(f_new);
            state.log_post = lp_new;
            ++counters.f_accepts;
        }
    }
}

Chain run_chain(std::uint64_t seed, const DensityVector& init_rho, const DfVector& init_f,
                const LikelihoodModel& like, const PriorSpec& prior, ProposalSpec proposal,
                const ChainControl& ctrl) {
    if (ctrl.n_iter <= ctrl.burn_in)
        throw std::invalid_argument("run_chain: need n_iter > burn_in");
    if (ctrl.thin < 1) throw std::invalid_argument("run_chain: thin must be >= 1");
    if (proposal.rho_step_sd.size() != init_rho.values.size())
        throw std::invalid_argument("run_chain: step-sd/rho size mismatch");
    for (double sd : proposal.rho_step_sd)
        if (!(sd > 0.0)) throw std::invalid_argument("run_chain: step sds must be positive");
    if (!(proposal.f_step_sd > 0.0))
        throw std::invalid_argument("run_chain: step sds must be positive");
    if (proposal.adapt && !(proposal.adapt_target > 0.0 && proposal.adapt_target < 1.0))
        throw std::invalid_argument("run_chain: adapt_target outside (0,1)");

    Rng rng(seed);
    ChainState state = make_initial_state(init_rho, init_f, like, prior);

    Chain chain;
    chain.seed = seed;
    chain.n_iter = ctrl.n_iter;
    chain.burn_in = ctrl.burn_in;
    chain.thin = ctrl.thin;
    chain.n_rho = init_rho.values.size();
    chain.n_f = init_f.values.size();
    chain.samples.reserve((ctrl.n_iter - ctrl.burn_in) / ctrl.thin + 1);

    BlockCounters totals;
    BlockCounters window;  // acceptance within the current adaptation window
    const std::uint64_t interval = proposal.adapt_interval ? proposal.adapt_interval : 100;

    for (std::uint64_t iter = 1; iter <= ctrl.n_iter; ++iter) {
        BlockCounters before = totals;
        gibbs_iteration(rng, state, like, prior, proposal, totals);
        window.rho_accepts += totals.rho_accepts - before.rho_accepts;
        window.rho_proposals += totals.rho_proposals - before.rho_proposals;
        window.f_accepts += totals.f_accepts - before.f_accepts;
        window.f_proposals += totals.f_proposals - before.f_proposals;

        if (proposal.adapt && iter <= ctrl.burn_in && iter % interval == 0) {
            const double rho_rate = double(window.rho_accepts) / double(window.rho_proposals);
            const double f_rate = double(window.f_accepts) / double(window.f_proposals);
            const double up = std::exp(0.01), down = std::exp(-0.01);
            const double rho_factor = rho_rate > proposal.adapt_target ? up : down;
            for (double& sd : proposal.rho_step_sd) sd *= rho_factor;
            proposal.f_step_sd *= f_rate > proposal.adapt_target ? up : down;
            window = BlockCounters{};
        }

        if (iter > ctrl.burn_in && (iter - ctrl.burn_in) % ctrl.thin == 0) {
            chain.samples.push_back(
                ChainSample{iter, state.rho.values, state.f.values, state.log_post});
        }
    }

    chain.rho_proposals = totals.rho_proposals;
    chain.rho_accepts = totals.rho_accepts;
    chain.f_proposals = totals.f_proposals;
    chain.f_accepts = totals.f_accepts;
    chain.final_rho_step_sd = proposal.rho_step_sd;
    chain.final_f_step_sd = proposal.f_step_sd;
    return chain;
}

}  // namespace darkmass
