#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace ionchain::cli {

/** Flat run configuration shared by every subcommand. Resolution order is
    command-line flags over config-file values over the defaults below (and
    IONCHAIN_THREADS as a fallback for threads). Unknown keys in a config
    file are an error so that typos in physics parameters cannot pass
    silently.
*/
struct RunConfig {
    // chain and physics
    int n = 50;
    std::vector<int> n_list = {50, 150};
    std::vector<int> n_pair = {50, 100};
    double nu = 1.618033988749894848;
    std::vector<double> nu_list = {1.0, 1.3, 1.618, 2.0, 2.6};
    double k = 0.03;
    std::vector<double> k_list = {0.0, 0.2};
    double omega_tr = 0.0;  ///< 0 means: calibrate the trap for the target density
    // units
    double period_m = 1e-6;
    double mass_amu = 40.0;
    double charge_e = 1.0;
    // relaxation
    double grad_tol = 1e-10;
    int max_iter = 200000;
    int starts = 20;
    double perturbation = 0.3;
    std::uint64_t seed = 0;
    // sweep grid
    double k_min = 0.005;
    double k_max = 0.3;
    int k_points = 24;
    double densify_lo = 0.03;
    double densify_hi = 0.08;
    // calibration
    double density_tol = 0.005;
    // disorder
    double mean_spacing = 6.283185307179586;
    double halfwidth = 0.25;
    double kappa = 0.2;
    int n_seeds = 10;
    // map orbits
    std::string map = "standard";
    double k_eff = 0.5;
    double x0 = 0.1;
    double y0 = 0.05;
    double p0 = 0.0;  ///< 0 means: resonant momentum for nu
    int steps = 100000;
    // transition estimation
    std::string method = "gap";  ///< "gap" or "collapse"
    std::string in;              ///< optional sweep CSV to reuse in find-kc
    // output
    std::string out_dir = "out";
    std::string format = "csv";  ///< "csv" or "json"
    bool plot = false;
    int threads = 0;  ///< 0 means: IONCHAIN_THREADS or hardware concurrency
    bool extended = false;

    /// Serialize every field (the manifest's "config" object).
    nlohmann::json to_json() const;

    /// Apply values from a flat JSON object, skipping keys listed in
    /// `locked` (flags the user passed explicitly). Unknown keys throw.
    void apply_json(const nlohmann::json& j, const std::vector<std::string>& locked);

    /// Effective worker count after the flags/env/default cascade.
    int effective_threads() const;
};

/// Load a config file; accepts either a flat config object or a manifest
/// written by a previous run (detected by its "tool_version" + "config"
/// keys), in which case the embedded config is used.
nlohmann::json load_config_file(const std::filesystem::path& path);

inline constexpr const char* kToolVersion = "ionchain 0.1.0";

} // namespace ionchain::cli
