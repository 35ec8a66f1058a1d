#include "darkmass/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "darkmass/io.hpp"
#include "darkmass/summary.hpp"
#include "darkmass/svg.hpp"

namespace darkmass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: key '" + key + "': expected a boolean, got '" + v + "'");
}

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

json config_to_json(const RunConfig& c) {
    return json{{"catalog", c.catalog},
                {"output_dir", c.output_dir},
                {"code_units", c.code_units},
                {"n_iter", c.n_iter},
                {"burn_in", c.burn_in},
                {"thin", c.thin},
                {"seed", c.seed},
                {"chains", c.chains},
                {"gl_order", c.gl_order},
                {"gh_nodes", c.gh_nodes},
                {"convolve_errors", c.convolve_errors},
                {"adapt", c.adapt},
                {"adapt_target", c.adapt_target},
                {"raw_counts", c.raw_counts},
                {"rho_prior_sd_factor", c.rho_prior_sd_factor},
                {"f_prior_sd_factor", c.f_prior_sd_factor},
                {"rho_step_factor", c.rho_step_factor},
                {"f_step_factor", c.f_step_factor},
                {"hpd_mass", c.hpd_mass},
                {"likelihood_threads", c.likelihood_threads}};
}

json summary_to_json(const SummaryTable& t) {
    json params = json::array();
    for (const auto& p : t.parameters) {
        params.push_back(json{{"name", p.name},
                              {"hpd_lower", p.hpd_lower},
                              {"hpd_upper", p.hpd_upper},
                              {"mode", p.mode},
                              {"mean", p.mean},
                              {"ess", p.ess},
                              {"gelman_rubin", p.rhat}});
    }
    return json{{"hpd_mass", t.hpd_mass},
                {"n_rho", t.n_rho},
                {"n_f", t.n_f},
                {"n_samples", t.n_samples},
                {"n_chains", t.n_chains},
                {"parameters", params},
                {"map", json{{"log_post", t.map_log_post}, {"rho", t.map_rho}, {"f", t.map_f}}},
                {"enclosed_mass",
                 json{{"name", t.enclosed_mass.name},
                      {"hpd_lower", t.enclosed_mass.hpd_lower},
                      {"hpd_upper", t.enclosed_mass.hpd_upper},
                      {"mode", t.enclosed_mass.mode},
                      {"mean", t.enclosed_mass.mean}}},
                {"warnings", t.warnings}};
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "'");
    out << content;
}

void write_summary_artifacts(const fs::path& dir, const std::vector<Chain>& chains,
                             const RadialGrid& rgrid, const EnergyGrid& egrid, double hpd_mass) {
    const SummaryTable table = summarize_chains(chains, rgrid, hpd_mass);
    write_text(dir / "summary.json", summary_to_json(table).dump(2) + "\n");
    write_hpd_plot(table, rgrid, egrid, (dir / "hpd_plot.svg").string());
    for (const auto& p : table.parameters) {
        const std::size_t idx = &p - table.parameters.data();
        write_trace_plot(chains, idx, p.name, (dir / ("trace_" + p.name + ".svg")).string());
    }
}

struct StageFailure : std::runtime_error {
    StageFailure(const std::string& stage, const std::string& what)
        : std::runtime_error(stage + ": " + what) {}
};

}  // namespace

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config:" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "catalog") cfg.catalog = val;
            else if (key == "output_dir") cfg.output_dir = val;
            else if (key == "code_units") cfg.code_units = parse_bool(val, key);
            else if (key == "n_iter") cfg.n_iter = std::stoull(val);
            else if (key == "burn_in") cfg.burn_in = std::stoull(val);
            else if (key == "thin") cfg.thin = std::stoull(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "chains") cfg.chains = std::stoi(val);
            else if (key == "gl_order") cfg.gl_order = std::stoi(val);
            else if (key == "gh_nodes") cfg.gh_nodes = std::stoi(val);
            else if (key == "convolve_errors") cfg.convolve_errors = parse_bool(val, key);
            else if (key == "adapt") cfg.adapt = parse_bool(val, key);
            else if (key == "adapt_target") cfg.adapt_target = std::stod(val);
            else if (key == "raw_counts") cfg.raw_counts = parse_bool(val, key);
            else if (key == "rho_prior_sd_factor") cfg.rho_prior_sd_factor = std::stod(val);
            else if (key == "f_prior_sd_factor") cfg.f_prior_sd_factor = std::stod(val);
            else if (key == "rho_step_factor") cfg.rho_step_factor = std::stod(val);
            else if (key == "f_step_factor") cfg.f_step_factor = std::stod(val);
            else if (key == "hpd_mass") cfg.hpd_mass = std::stod(val);
            else if (key == "likelihood_threads") cfg.likelihood_threads = std::stoi(val);
            else
                throw ConfigError("config:" + std::to_string(line_no) + ": unknown key '" + key +
                                  "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config:" + std::to_string(line_no) + ": bad value for '" + key +
                              "': '" + val + "'");
        }
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.catalog.empty()) throw ConfigError("config: 'catalog' is required");
    if (!fs::exists(cfg.catalog))
        throw ConfigError("config: catalog '" + cfg.catalog + "' does not exist");
    if (cfg.n_iter == 0 || cfg.burn_in >= cfg.n_iter)
        throw ConfigError("config: need n_iter > burn_in");
    if (cfg.thin < 1) throw ConfigError("config: thin must be >= 1");
    if (cfg.chains < 1) throw ConfigError("config: chains must be >= 1");
    if (cfg.gl_order < 2 || cfg.gh_nodes < 2)
        throw ConfigError("config: quadrature orders must be >= 2");
    if (!(cfg.adapt_target > 0.0 && cfg.adapt_target < 1.0))
        throw ConfigError("config: adapt_target outside (0,1)");
    if (!(cfg.rho_prior_sd_factor > 0.0) || !(cfg.f_prior_sd_factor > 0.0) ||
        !(cfg.rho_step_factor > 0.0) || !(cfg.f_step_factor > 0.0))
        throw ConfigError("config: scale factors must be positive");
    if (!(cfg.hpd_mass > 0.0 && cfg.hpd_mass < 1.0))
        throw ConfigError("config: hpd_mass outside (0,1)");
    if (cfg.likelihood_threads < 0) throw ConfigError("config: likelihood_threads < 0");
}

int thread_cap() {
    if (const char* env = std::getenv("DARKMASS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

PriorSpec default_priors(const BinningResult& binning, const RunConfig& cfg) {
    PriorSpec prior;
    prior.rho_seeds = binning.emp.rho_emp.values;
    prior.rho_prior_sd.resize(prior.rho_seeds.size());
    for (std::size_t i = 0; i < prior.rho_seeds.size(); ++i)
        prior.rho_prior_sd[i] = std::max(cfg.rho_prior_sd_factor * prior.rho_seeds[i], 1.0);
    const double erange = -binning.egrid.lower();
    prior.f_seed = 1.0 / (static_cast<double>(binning.egrid.bins()) * erange);
    prior.f_prior_sd = cfg.f_prior_sd_factor * prior.f_seed;
    return prior;
}

ProposalSpec default_proposal(const PriorSpec& prior, const RunConfig& cfg) {
    ProposalSpec prop;
    prop.rho_step_sd.resize(prior.rho_seeds.size());
    for (std::size_t i = 0; i < prior.rho_seeds.size(); ++i)
        prop.rho_step_sd[i] = std::max(cfg.rho_step_factor * prior.rho_seeds[i], 1e-12);
    prop.f_step_sd = cfg.f_step_factor * prior.f_seed;
    prop.adapt = cfg.adapt;
    prop.adapt_target = cfg.adapt_target;
    return prop;
}

int run_pipeline(const RunConfig& cfg) {
    validate_config(cfg);
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    std::error_code ec;
    fs::remove(dir / "FAILED", ec);

    const auto fail = [&](const std::string& stage, const std::string& what) {
        write_text(dir / "FAILED", stage + ": " + what + "\n");
        std::cerr << "darkmass: " << stage << ": " << what << "\n";
        return 1;
    };

    try {
        write_text(dir / "config_resolved.json", config_to_json(cfg).dump(2) + "\n");

        ObservationSet data;
        try {
            data = load_catalog(cfg.catalog);
        } catch (const std::exception& e) {
            return fail("ingest", e.what());
        }

        const UnitSystem units = cfg.code_units ? UnitSystem::code() : UnitSystem::astro();
        BinningResult binning = [&] {
            try {
                BinningConfig bcfg;
                bcfg.raw_counts = cfg.raw_counts;
                return bin_data(data, units, bcfg);
            } catch (const std::exception& e) {
                throw StageFailure("binning", e.what());
            }
        }();

        json grids_json{
            {"radial_edges", binning.rgrid.edges},
            {"energy_edges", binning.egrid.edges},
            {"empirical_density", binning.emp.rho_emp.values},
            {"histogram_scale_c", binning.emp.scale_c},
            {"G", units.G},
            {"code_units", cfg.code_units}};
        write_text(dir / "grids.json", grids_json.dump(2) + "\n");

        const PriorSpec prior = default_priors(binning, cfg);
        const ProposalSpec proposal = default_proposal(prior, cfg);

        ProjectionConfig pcfg;
        pcfg.gl_order = cfg.gl_order;
        pcfg.gh_nodes = cfg.gh_nodes;
        pcfg.convolve_errors = cfg.convolve_errors;

        const int cap = thread_cap();
        const int like_threads =
            std::min(cap, cfg.likelihood_threads > 0 ? cfg.likelihood_threads : 1);
        ProjectedPdfLikelihood like(binning.rgrid, binning.egrid, data, pcfg, units.G,
                                    like_threads);

        DensityVector init_rho{prior.rho_seeds};
        DfVector init_f{std::vector<double>(binning.egrid.bins(), prior.f_seed)};
        ChainControl ctrl{cfg.n_iter, cfg.burn_in, cfg.thin};

        std::vector<Chain> chains(static_cast<std::size_t>(cfg.chains));
        try {
            const int parallel = std::max(1, std::min(cfg.chains, cap));
            std::vector<std::future<void>> futures;
            std::atomic<int> next{0};
            for (int w = 0; w < parallel; ++w) {
                futures.push_back(std::async(std::launch::async, [&] {
                    for (int k = next.fetch_add(1); k < cfg.chains; k = next.fetch_add(1))
                        chains[static_cast<std::size_t>(k)] =
                            run_chain(cfg.seed + static_cast<std::uint64_t>(k), init_rho, init_f,
                                      like, prior, proposal, ctrl);
                }));
            }
            for (auto& f : futures) f.get();
        } catch (const std::exception& e) {
            throw StageFailure("sampling", e.what());
        }

        for (std::size_t k = 0; k < chains.size(); ++k)
            save_chain_csv(chains[k], (dir / ("chain_" + std::to_string(k) + ".csv")).string());

        try {
            write_summary_artifacts(dir, chains, binning.rgrid, binning.egrid, cfg.hpd_mass);
        } catch (const std::exception& e) {
            throw StageFailure("summary", e.what());
        }
        return 0;
    } catch (const StageFailure& e) {
        const std::string what = e.what();
        const auto colon = what.find(':');
        return fail(what.substr(0, colon), what.substr(colon + 2));
    } catch (const std::exception& e) {
        return fail("pipeline", e.what());
    }
}

int summarize_directory(const std::string& dir_in, double hpd_mass) {
    const fs::path dir(dir_in);
    json grids_json;
    {
        std::ifstream in(dir / "grids.json");
        if (!in)
            throw std::runtime_error("summarize: cannot open '" + (dir / "grids.json").string() +
                                     "'");
        in >> grids_json;
    }
    const RadialGrid rgrid(grids_json.at("radial_edges").get<std::vector<double>>());
    const EnergyGrid egrid(grids_json.at("energy_edges").get<std::vector<double>>());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("chain_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".csv")
            files.push_back(entry.path());
    }
    if (files.empty()) throw std::runtime_error("summarize: no chain_*.csv in '" + dir_in + "'");
    // numeric order, so chain_10 sorts after chain_2
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
        const auto key = [](const fs::path& p) {
            const std::string stem = p.stem().string();
            return std::stoul(stem.substr(stem.find('_') + 1));
        };
        return key(a) < key(b);
    });

    std::vector<Chain> chains;
    for (const auto& f : files) chains.push_back(load_chain_csv(f.string()));
    write_summary_artifacts(dir, chains, rgrid, egrid, hpd_mass);
    return 0;
}

}  // namespace darkmass
