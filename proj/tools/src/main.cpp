#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionchain/errors.hpp"

#include "commands.hpp"
#include "run_config.hpp"

namespace {

using ionchain::cli::RunConfig;

struct SubcommandSetup {
    CLI::App* app = nullptr;
    std::function<int(const RunConfig&)> run;
    std::string config_path;
};

/// Register the flags a subcommand understands; every flag name doubles as a
/// config-file key, so precedence resolution can tell which keys the user
/// locked on the command line.
void add_common_output_flags(CLI::App* app, RunConfig& cfg, std::string& config_path) {
    app->add_option("--config", config_path,
                    "flat JSON config file, or a manifest.json from a previous run");
    app->add_option("--out", cfg.out_dir, "output directory")->option_text("DIR");
    app->add_option("--format", cfg.format, "data file format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_flag("--plot", cfg.plot, "also write SVG plots");
    app->add_option("--seed", cfg.seed, "base RNG seed (default 0, fully deterministic)");
    app->add_option("--threads", cfg.threads,
                    "worker cap (default: IONCHAIN_THREADS or hardware)");
}

void add_relax_flags(CLI::App* app, RunConfig& cfg) {
    app->add_option("--tol", cfg.grad_tol, "gradient tolerance, infinity norm");
    app->add_option("--max-iter", cfg.max_iter, "relaxation iteration budget");
    app->add_option("--starts", cfg.starts, "multi-start count");
    app->add_option("--perturbation", cfg.perturbation, "start perturbation scale");
}

/// Map each CLI flag back to its config key to lock explicitly-given values.
const std::vector<std::pair<std::string, std::string>>& flag_to_key() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"--out", "out_dir"},       {"--format", "format"},       {"--plot", "plot"},
        {"--seed", "seed"},         {"--threads", "threads"},     {"--tol", "grad_tol"},
        {"--max-iter", "max_iter"}, {"--starts", "starts"},       {"--perturbation", "perturbation"},
        {"--n", "n"},               {"--n-list", "n_list"},       {"--n-pair", "n_pair"},
        {"--nu", "nu"},             {"--nu-list", "nu_list"},     {"--k", "k"},
        {"--k-list", "k_list"},     {"--omega-tr", "omega_tr"},   {"--period", "period_m"},
        {"--mass-amu", "mass_amu"}, {"--charge-e", "charge_e"},   {"--k-min", "k_min"},
        {"--k-max", "k_max"},       {"--k-points", "k_points"},   {"--densify-lo", "densify_lo"},
        {"--densify-hi", "densify_hi"}, {"--density-tol", "density_tol"},
        {"--mean-spacing", "mean_spacing"}, {"--halfwidth", "halfwidth"},
        {"--kappa", "kappa"},       {"--n-seeds", "n_seeds"},     {"--map", "map"},
        {"--k-eff", "k_eff"},       {"--x0", "x0"},               {"--y0", "y0"},
        {"--p0", "p0"},             {"--steps", "steps"},         {"--method", "method"},
        {"--in", "in"},             {"--extended", "extended"},
    };
    return table;
}

int dispatch(const SubcommandSetup& sub, RunConfig& cfg) {
    if (!sub.config_path.empty()) {
        std::vector<std::string> locked;
        for (const auto& [flag, key] : flag_to_key()) {
            const CLI::Option* opt = sub.app->get_option_no_throw(flag);
            if (opt != nullptr && opt->count() > 0)
                locked.push_back(key);
        }
        cfg.apply_json(ionchain::cli::load_config_file(sub.config_path), locked);
    }
    return sub.run(cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for 1D Coulomb ion chains in a periodic potential"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ionchain::cli::kToolVersion));

    RunConfig cfg;
    std::vector<SubcommandSetup> subs(10);

    auto list_opt = [](CLI::App* a, const char* name, auto& target, const char* desc) {
        a->add_option(name, target, desc)->delimiter(',');
    };

    {
        auto& s = subs[0];
        s.app = app.add_subcommand("units", "SI to dimensionless unit scales");
        s.app->add_option("--period", cfg.period_m, "lattice period in meters");
        s.app->add_option("--mass-amu", cfg.mass_amu, "ion mass in atomic mass units");
        s.app->add_option("--charge-e", cfg.charge_e, "ion charge in elementary charges");
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_units;
    }
    {
        auto& s = subs[1];
        s.app = app.add_subcommand("ground-state", "relax a chain to its minimum");
        s.app->add_option("--n", cfg.n, "ion count");
        s.app->add_option("--k", cfg.k, "lattice amplitude K");
        s.app->add_option("--omega-tr", cfg.omega_tr, "trap frequency (0: calibrate)");
        s.app->add_option("--nu", cfg.nu, "target central density");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_ground_state;
    }
    {
        auto& s = subs[2];
        s.app = app.add_subcommand("calibrate-trap", "find omega_tr for a target density");
        s.app->add_option("--n", cfg.n, "ion count");
        s.app->add_option("--nu", cfg.nu, "target central density");
        s.app->add_option("--k", cfg.k, "lattice amplitude during calibration");
        s.app->add_option("--density-tol", cfg.density_tol, "relative density tolerance");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_calibrate_trap;
    }
    {
        auto& s = subs[3];
        s.app = app.add_subcommand("phonons", "spectrum about the relaxed minimum");
        s.app->add_option("--n", cfg.n, "ion count");
        s.app->add_option("--k", cfg.k, "lattice amplitude K");
        s.app->add_option("--omega-tr", cfg.omega_tr, "trap frequency (0: calibrate)");
        s.app->add_option("--nu", cfg.nu, "target central density");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_phonons;
    }
    {
        auto& s = subs[4];
        s.app = app.add_subcommand("map-orbit", "iterate the standard or equilibrium map");
        s.app->add_option("--map", cfg.map, "standard or ion");
        s.app->add_option("--k-eff", cfg.k_eff, "standard-map chaos parameter");
        s.app->add_option("--k", cfg.k, "ion-map lattice amplitude");
        s.app->add_option("--omega-tr", cfg.omega_tr, "ion-map trap frequency");
        s.app->add_option("--nu", cfg.nu, "density fixing the default p0");
        s.app->add_option("--x0", cfg.x0, "initial position/phase");
        s.app->add_option("--y0", cfg.y0, "initial standard-map momentum");
        s.app->add_option("--p0", cfg.p0, "initial ion-map momentum (0: resonant)");
        s.app->add_option("--steps", cfg.steps, "number of map steps");
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_map_orbit;
    }
    {
        auto& s = subs[5];
        s.app = app.add_subcommand("sweep-k", "gap versus lattice amplitude");
        list_opt(s.app, "--n-list", cfg.n_list, "chain sizes, comma separated");
        s.app->add_option("--nu", cfg.nu, "target central density");
        s.app->add_option("--k-min", cfg.k_min, "smallest K");
        s.app->add_option("--k-max", cfg.k_max, "largest K");
        s.app->add_option("--k-points", cfg.k_points, "log-spaced base points");
        s.app->add_option("--densify-lo", cfg.densify_lo, "densify window start");
        s.app->add_option("--densify-hi", cfg.densify_hi, "densify window end");
        s.app->add_option("--density-tol", cfg.density_tol, "calibration density tolerance");
        s.app->add_flag("--extended", cfg.extended, "include N=300");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_sweep_k;
    }
    {
        auto& s = subs[6];
        s.app = app.add_subcommand("find-kc", "locate the pinning transition");
        s.app->add_option("--in", cfg.in, "reuse an existing sweep CSV");
        s.app->add_option("--method", cfg.method, "gap (default) or collapse");
        list_opt(s.app, "--n-list", cfg.n_list, "chain sizes when sweeping");
        s.app->add_option("--nu", cfg.nu, "target central density");
        s.app->add_option("--k-min", cfg.k_min, "smallest K");
        s.app->add_option("--k-max", cfg.k_max, "largest K");
        s.app->add_option("--k-points", cfg.k_points, "log-spaced base points");
        s.app->add_option("--densify-lo", cfg.densify_lo, "densify window start");
        s.app->add_option("--densify-hi", cfg.densify_hi, "densify window end");
        s.app->add_option("--density-tol", cfg.density_tol, "calibration density tolerance");
        s.app->add_flag("--extended", cfg.extended, "include N=300");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_find_kc;
    }
    {
        auto& s = subs[7];
        s.app = app.add_subcommand("kc-scaling", "transition amplitude versus density");
        list_opt(s.app, "--nu-list", cfg.nu_list, "densities, comma separated");
        list_opt(s.app, "--n-pair", cfg.n_pair, "chain-size pair for each density");
        s.app->add_option("--density-tol", cfg.density_tol, "calibration density tolerance");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_kc_scaling;
    }
    {
        auto& s = subs[8];
        s.app = app.add_subcommand("minima", "quasi-degenerate minima statistics");
        list_opt(s.app, "--k-list", cfg.k_list, "lattice amplitudes");
        list_opt(s.app, "--n-list", cfg.n_list, "chain sizes");
        s.app->add_option("--nu", cfg.nu, "target central density");
        s.app->add_option("--density-tol", cfg.density_tol, "calibration density tolerance");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_minima;
    }
    {
        auto& s = subs[9];
        s.app = app.add_subcommand("disorder", "microtrap localization study");
        list_opt(s.app, "--n-list", cfg.n_list, "chain sizes");
        s.app->add_option("--mean-spacing", cfg.mean_spacing, "mean microtrap spacing");
        s.app->add_option("--halfwidth", cfg.halfwidth, "relative spacing halfwidth w");
        s.app->add_option("--kappa", cfg.kappa, "microtrap stiffness");
        s.app->add_option("--n-seeds", cfg.n_seeds, "disorder realizations per size");
        add_relax_flags(s.app, cfg);
        add_common_output_flags(s.app, cfg, s.config_path);
        s.run = ionchain::cli::cmd_disorder;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& sub : subs)
            if (sub.app->parsed())
                return dispatch(sub, cfg);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
