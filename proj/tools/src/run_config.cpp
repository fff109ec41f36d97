#include "run_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace ionchain::cli {

using nlohmann::json;

json RunConfig::to_json() const {
    json j;
    j["n"] = n;
    j["n_list"] = n_list;
    j["n_pair"] = n_pair;
    j["nu"] = nu;
    j["nu_list"] = nu_list;
    j["k"] = k;
    j["k_list"] = k_list;
    j["omega_tr"] = omega_tr;
    j["period_m"] = period_m;
    j["mass_amu"] = mass_amu;
    j["charge_e"] = charge_e;
    j["grad_tol"] = grad_tol;
    j["max_iter"] = max_iter;
    j["starts"] = starts;
    j["perturbation"] = perturbation;
    j["seed"] = seed;
    j["k_min"] = k_min;
    j["k_max"] = k_max;
    j["k_points"] = k_points;
    j["densify_lo"] = densify_lo;
    j["densify_hi"] = densify_hi;
    j["density_tol"] = density_tol;
    j["mean_spacing"] = mean_spacing;
    j["halfwidth"] = halfwidth;
    j["kappa"] = kappa;
    j["n_seeds"] = n_seeds;
    j["map"] = map;
    j["k_eff"] = k_eff;
    j["x0"] = x0;
    j["y0"] = y0;
    j["p0"] = p0;
    j["steps"] = steps;
    j["method"] = method;
    j["in"] = in;
    j["out_dir"] = out_dir;
    j["format"] = format;
    j["plot"] = plot;
    j["threads"] = threads;
    j["extended"] = extended;
    return j;
}

void RunConfig::apply_json(const json& j, const std::vector<std::string>& locked) {
    if (!j.is_object())
        throw std::invalid_argument("config: expected a flat JSON object");
    auto is_locked = [&](const std::string& key) {
        return std::find(locked.begin(), locked.end(), key) != locked.end();
    };
    for (const auto& [key, value] : j.items()) {
        if (is_locked(key))
            continue;
        if (key == "n") n = value.get<int>();
        else if (key == "n_list") n_list = value.get<std::vector<int>>();
        else if (key == "n_pair") n_pair = value.get<std::vector<int>>();
        else if (key == "nu") nu = value.get<double>();
        else if (key == "nu_list") nu_list = value.get<std::vector<double>>();
        else if (key == "k") k = value.get<double>();
        else if (key == "k_list") k_list = value.get<std::vector<double>>();
        else if (key == "omega_tr") omega_tr = value.get<double>();
        else if (key == "period_m") period_m = value.get<double>();
        else if (key == "mass_amu") mass_amu = value.get<double>();
        else if (key == "charge_e") charge_e = value.get<double>();
        else if (key == "grad_tol") grad_tol = value.get<double>();
        else if (key == "max_iter") max_iter = value.get<int>();
        else if (key == "starts") starts = value.get<int>();
        else if (key == "perturbation") perturbation = value.get<double>();
        else if (key == "seed") seed = value.get<std::uint64_t>();
        else if (key == "k_min") k_min = value.get<double>();
        else if (key == "k_max") k_max = value.get<double>();
        else if (key == "k_points") k_points = value.get<int>();
        else if (key == "densify_lo") densify_lo = value.get<double>();
        else if (key == "densify_hi") densify_hi = value.get<double>();
        else if (key == "density_tol") density_tol = value.get<double>();
        else if (key == "mean_spacing") mean_spacing = value.get<double>();
        else if (key == "halfwidth") halfwidth = value.get<double>();
        else if (key == "kappa") kappa = value.get<double>();
        else if (key == "n_seeds") n_seeds = value.get<int>();
        else if (key == "map") map = value.get<std::string>();
        else if (key == "k_eff") k_eff = value.get<double>();
        else if (key == "x0") x0 = value.get<double>();
        else if (key == "y0") y0 = value.get<double>();
        else if (key == "p0") p0 = value.get<double>();
        else if (key == "steps") steps = value.get<int>();
        else if (key == "method") method = value.get<std::string>();
        else if (key == "in") in = value.get<std::string>();
        else if (key == "out_dir") out_dir = value.get<std::string>();
        else if (key == "format") format = value.get<std::string>();
        else if (key == "plot") plot = value.get<bool>();
        else if (key == "threads") threads = value.get<int>();
        else if (key == "extended") extended = value.get<bool>();
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

int RunConfig::effective_threads() const {
    if (threads > 0)
        return threads;
    if (const char* env = std::getenv("IONCHAIN_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0)
            return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path.string());
    json j = json::parse(in);
    if (j.is_object() && j.contains("tool_version") && j.contains("config"))
        return j.at("config");  // replaying a manifest
    return j;
}

} // namespace ionchain::cli
