#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "darkmass/io.hpp"
#include "darkmass/pipeline.hpp"
#include "darkmass/synthetic.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    darkmass::RunConfig cfg;
    try {
        cfg = darkmass::parse_config_file(config_path);
        darkmass::validate_config(cfg);
    } catch (const darkmass::ConfigError& e) {
        std::cerr << "darkmass: " << e.what() << "\n";
        return 2;
    }
    return darkmass::run_pipeline(cfg);
}

int cmd_synth(const std::string& model_name, int n, const std::string& out_path, double mass,
              double scale, std::uint64_t seed, double sigma_v3, bool code_units,
              const std::string& truth_out) {
    darkmass::AnalyticModel model;
    if (model_name == "plummer")
        model.kind = darkmass::ModelKind::Plummer;
    else if (model_name == "uniform")
        model.kind = darkmass::ModelKind::UniformSphere;
    else {
        std::cerr << "darkmass synth: unknown model '" << model_name << "'\n";
        return 2;
    }
    model.total_mass = mass;
    model.scale = scale;
    model.G = code_units ? darkmass::UnitSystem::code().G : darkmass::UnitSystem::astro().G;

    darkmass::Rng rng(seed);
    const auto cat = darkmass::sample_catalog(
        rng, model, n,
        sigma_v3 >= 0.0 ? std::optional<double>(sigma_v3) : std::nullopt);
    darkmass::save_catalog(cat.observations, out_path);

    if (!truth_out.empty()) {
        nlohmann::json truth{{"model", model_name},
                             {"total_mass", model.total_mass},
                             {"scale", model.scale},
                             {"G", model.G},
                             {"n", n},
                             {"seed", seed},
                             {"sigma_v3", sigma_v3}};
        std::ofstream out(truth_out, std::ios::binary);
        if (!out) {
            std::cerr << "darkmass synth: cannot open '" << truth_out << "'\n";
            return 1;
        }
        out << truth.dump(2) << "\n";
    }
    std::cout << "wrote " << cat.observations.size() << " tracers to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"darkmass: Bayesian inference of the spherical gravitational mass density and "
                 "isotropic distribution function from projected stellar kinematics"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run the full inference pipeline");
    run->add_option("--config", config_path, "flat key=value configuration file")->required();

    std::string model_name = "plummer", out_path, truth_out;
    int n = 255;
    double mass = 1.0e11, scale = 3.0, sigma_v3 = -1.0;
    std::uint64_t synth_seed = 1;
    bool code_units = false;
    auto* synth = app.add_subcommand("synth", "generate a mock catalog from an analytic model");
    synth->add_option("--model", model_name, "plummer|uniform (sampling: plummer only)");
    synth->add_option("--n", n, "number of tracers")->required();
    synth->add_option("--out", out_path, "output catalog CSV")->required();
    synth->add_option("--mass", mass, "total mass (Msun, or code units)");
    synth->add_option("--scale", scale, "scale length (kpc, or code units)");
    synth->add_option("--seed", synth_seed, "random seed");
    synth->add_option("--sigma-v3", sigma_v3, "Gaussian v3 error scale (omit for noiseless)");
    synth->add_flag("--code-units", code_units, "use G = 1 instead of kpc/km/s/Msun");
    synth->add_option("--truth-out", truth_out, "write the model parameters as JSON");

    std::string chains_dir;
    double hpd_mass = 0.95;
    auto* summarize = app.add_subcommand("summarize", "recompute summaries from stored chains");
    summarize->add_option("--chains", chains_dir, "output directory of a previous run")
        ->required();
    summarize->add_option("--hpd", hpd_mass, "HPD probability mass");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) return cmd_run(config_path);
        if (app.got_subcommand(synth))
            return cmd_synth(model_name, n, out_path, mass, scale, synth_seed, sigma_v3,
                             code_units, truth_out);
        if (app.got_subcommand(summarize))
            return darkmass::summarize_directory(chains_dir, hpd_mass);
    } catch (const std::exception& e) {
        std::cerr << "darkmass: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
