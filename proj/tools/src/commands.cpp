#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ionchain/errors.hpp"
#include "ionchain/experiments.hpp"
#include "ionchain/ground_state.hpp"
#include "ionchain/maps.hpp"
#include "ionchain/phonons.hpp"
#include "ionchain/units.hpp"

#include "report.hpp"
#include "svg.hpp"

namespace ionchain::cli {

using nlohmann::json;

namespace {

RelaxSettings relax_settings(const RunConfig& cfg) {
    RelaxSettings s;
    s.grad_tolerance = cfg.grad_tol;
    s.max_iterations = cfg.max_iter;
    s.n_starts = cfg.starts;
    s.perturbation_scale = cfg.perturbation;
    s.seed = cfg.seed;
    return s;
}

SweepSettings sweep_settings(const RunConfig& cfg) {
    SweepSettings s;
    s.relax = relax_settings(cfg);
    s.density_tolerance = cfg.density_tol;
    s.threads = cfg.effective_threads();
    return s;
}

/// Trap frequency: explicit value, or calibrated for the target density.
double resolve_omega(const RunConfig& cfg, RunReport& report) {
    if (cfg.omega_tr > 0.0)
        return cfg.omega_tr;
    const CalibrationResult cal =
        calibrate_trap(cfg.n, cfg.nu, cfg.k, cfg.density_tol, relax_settings(cfg));
    if (!cal.ok)
        throw DomainError("trap calibration failed: no bracket in [1e-6, 1]");
    report.stage("calibrate-trap", {},
                 "ok (omega_tr=" + fmt12(cal.omega_tr) + ", density=" + fmt12(cal.density) + ")");
    return cal.omega_tr;
}

std::vector<double> make_k_grid(const RunConfig& cfg) {
    if (!(cfg.k_min > 0.0) || !(cfg.k_max > cfg.k_min) || cfg.k_points < 2)
        throw DomainError("sweep grid: need 0 < k_min < k_max and k_points >= 2");
    std::vector<double> base;
    for (int i = 0; i < cfg.k_points; ++i)
        base.push_back(cfg.k_min *
                       std::pow(cfg.k_max / cfg.k_min,
                                static_cast<double>(i) / (cfg.k_points - 1)));
    std::vector<double> grid;
    for (std::size_t i = 0; i + 1 < base.size(); ++i) {
        grid.push_back(base[i]);
        if (base[i] >= cfg.densify_lo && base[i + 1] <= cfg.densify_hi)
            grid.push_back(std::sqrt(base[i] * base[i + 1]));
    }
    grid.push_back(base.back());
    return grid;
}

std::vector<int> sweep_sizes(const RunConfig& cfg) {
    std::vector<int> sizes = cfg.n_list;
    if (cfg.extended && std::find(sizes.begin(), sizes.end(), 300) == sizes.end())
        sizes.push_back(300);
    return sizes;
}

std::vector<std::vector<std::string>> sweep_rows(const std::vector<SweepRecord>& records) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.size());
    for (const auto& r : records)
        rows.push_back({fmt12(r.k), std::to_string(r.n_ions), fmt12(r.omega_tr), fmt12(r.omega0),
                        fmt12(r.energy), std::to_string(r.n_distinct_minima),
                        r.converged ? "1" : "0"});
    return rows;
}

TransitionMethod parse_method(const std::string& name) {
    if (name == "gap")
        return TransitionMethod::GapThreshold;
    if (name == "collapse")
        return TransitionMethod::NCollapse;
    throw DomainError("method must be 'gap' or 'collapse'");
}

std::vector<SweepRecord> load_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open sweep file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "K,N,omega_tr,omega0,energy,n_minima,converged")
        throw DomainError("unexpected sweep CSV header in " + path.string());
    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 7)
            throw DomainError("malformed sweep CSV row: " + line);
        SweepRecord r;
        r.k = std::stod(fields[0]);
        r.n_ions = std::stoi(fields[1]);
        r.omega_tr = std::stod(fields[2]);
        r.omega0 = std::stod(fields[3]);
        r.energy = std::stod(fields[4]);
        r.n_distinct_minima = std::stoi(fields[5]);
        r.converged = fields[6] == "1";
        records.push_back(r);
    }
    return records;
}

json transition_details_json(const TransitionEstimate& est) {
    json details = json::array();
    for (const auto& d : est.details) {
        json row;
        row["k"] = d.k;
        row["collapse"] = d.collapse;
        row["min_omega0"] = d.min_omega0;
        row["gap_floor"] = d.gap_floor;
        row["floor_margin"] = d.floor_margin;
        row["pass"] = d.pass;
        details.push_back(row);
    }
    return details;
}

void plot_sweep(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
    std::map<int, PlotSeries> by_n;
    for (const auto& r : records) {
        if (!r.converged)
            continue;
        auto& series = by_n[r.n_ions];
        if (series.label.empty())
            series.label = "N=" + std::to_string(r.n_ions);
        series.points.emplace_back(r.k, r.omega0);
    }
    std::vector<PlotSeries> series;
    for (auto& [n, s] : by_n)
        series.push_back(std::move(s));
    PlotOptions opt;
    opt.x_label = "K";
    opt.y_label = "omega_0";
    opt.log_x = true;
    opt.log_y = true;
    write_svg_plot(series, opt, path);
}

} // namespace

int cmd_units(const RunConfig& cfg) {
    RunReport report("units", cfg);
    PhysicalInputs in;
    in.lattice_period_m = cfg.period_m;
    in.ion_mass_kg = mass_kg_from_amu(cfg.mass_amu);
    in.ion_charge_C = cfg.charge_e * si::elementary_charge;
    const UnitScales s = derive_scales(in);
    json j;
    j["r_a_m"] = s.length_m;
    j["eps_a_J"] = s.energy_J;
    j["eps_a_eV"] = s.energy_eV;
    j["eps_a_K"] = s.energy_K;
    j["E_adc_Vm"] = s.field_V_per_m;
    j["v_a_ms"] = s.velocity_m_per_s;
    j["t_a_s"] = s.time_s;
    j["hbar_eff"] = s.hbar_eff;
    std::cout << j.dump(2) << std::endl;
    std::ofstream out(report.out_dir() / "units.json", std::ios::binary);
    out << j.dump(2) << '\n';
    report.stage("units", {"units.json"});
    report.write_manifest();
    return 0;
}

int cmd_ground_state(const RunConfig& cfg) {
    RunReport report("ground-state", cfg);
    const double omega = resolve_omega(cfg, report);
    const ChainParams params = ChainParams::periodic(cfg.n, omega, cfg.k);
    const GroundStateResult result = ground_state(params, relax_settings(cfg), cfg.nu);
    if (!result.best)
        throw DomainError("ground-state: no start converged");
    const IonConfiguration& best = *result.best;

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < best.positions.size(); ++i) {
        const bool last = i + 1 == best.positions.size();
        rows.push_back({std::to_string(i), fmt12(best.positions[i]),
                        last ? "" : fmt12(best.positions[i + 1] - best.positions[i])});
    }
    const auto table = report.table("ground_state", "index,position,spacing_to_next", rows);

    json summary;
    summary["energy"] = best.energy;
    summary["grad_inf_norm"] = best.grad_inf_norm;
    summary["n_iterations"] = best.n_iterations;
    summary["omega_tr"] = omega;
    summary["n_distinct_minima"] = result.catalog.n_distinct;
    summary["central_density"] = cfg.n >= 3 ? central_density(best) : 0.0;
    summary["rotation_number"] = cfg.n >= 2 ? rotation_number(best.positions) : 0.0;
    if (result.catalog.energy_gaps.size() > 1)
        summary["delta_e1"] = result.catalog.energy_gaps[1];
    std::ofstream out(report.out_dir() / "summary.json", std::ios::binary);
    out << summary.dump(2) << '\n';

    report.stage("ground-state", {table, "summary.json"});
    report.write_manifest();
    return 0;
}

int cmd_calibrate_trap(const RunConfig& cfg) {
    RunReport report("calibrate-trap", cfg);
    const CalibrationResult cal =
        calibrate_trap(cfg.n, cfg.nu, cfg.k, cfg.density_tol, relax_settings(cfg));
    json j;
    j["ok"] = cal.ok;
    j["omega_tr"] = cal.omega_tr;
    j["density"] = cal.density;
    j["n_probes"] = cal.n_probes;
    std::cout << j.dump(2) << std::endl;
    std::ofstream out(report.out_dir() / "calibration.json", std::ios::binary);
    out << j.dump(2) << '\n';
    report.stage("calibrate-trap", {"calibration.json"}, cal.ok ? "ok" : "no-bracket");
    report.write_manifest();
    return cal.ok ? 0 : 1;
}

int cmd_phonons(const RunConfig& cfg) {
    RunReport report("phonons", cfg);
    const double omega = resolve_omega(cfg, report);
    const ChainParams params = ChainParams::periodic(cfg.n, omega, cfg.k);
    const GroundStateResult result = ground_state(params, relax_settings(cfg), cfg.nu);
    if (!result.best)
        throw DomainError("phonons: no start converged");
    const PhononSpectrum spec = spectrum(params, *result.best);
    const auto localization = localization_report(spec);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < spec.frequencies.size(); ++i)
        rows.push_back({std::to_string(i), fmt12(spec.k_scaled[i]), fmt12(spec.frequencies[i]),
                        fmt12(spec.participation_ratios[i]), fmt12(localization[i].centroid),
                        fmt12(localization[i].spread)});
    const auto table = report.table(
        "phonons", "mode_index,k_scaled,omega,participation_ratio,centroid,spread", rows);
    std::vector<std::string> outputs = {table};

    if (cfg.plot) {
        PlotSeries series;
        series.label = "N=" + std::to_string(cfg.n) + " K=" + fmt12(cfg.k);
        for (std::size_t i = 0; i < spec.frequencies.size(); ++i)
            series.points.emplace_back(spec.k_scaled[i], spec.frequencies[i]);
        PlotOptions opt;
        opt.x_label = "k = i/N";
        opt.y_label = "omega";
        write_svg_plot({series}, opt, report.out_dir() / "spectrum.svg");
        outputs.push_back("spectrum.svg");
    }
    report.stage("phonons", outputs);
    report.write_manifest();
    return 0;
}

int cmd_map_orbit(const RunConfig& cfg) {
    RunReport report("map-orbit", cfg);
    std::vector<std::vector<std::string>> rows;
    std::string status = "ok";
    if (cfg.map == "standard") {
        StandardMapState s{cfg.x0, cfg.y0};
        rows.push_back({"0", fmt12(s.x), fmt12(s.y)});
        for (int i = 1; i <= cfg.steps; ++i) {
            s = standard_map_step(s, cfg.k_eff);
            rows.push_back({std::to_string(i), fmt12(s.x), fmt12(s.y)});
        }
    } else if (cfg.map == "ion") {
        IonMapState s{cfg.x0, cfg.p0 > 0.0 ? cfg.p0 : resonant_momentum(cfg.nu)};
        rows.push_back({"0", fmt12(s.x), fmt12(s.p)});
        for (int i = 1; i <= cfg.steps; ++i) {
            try {
                s = ion_map_step(s, cfg.k, cfg.omega_tr);
            } catch (const OrbitEscapeError&) {
                std::cerr << "map-orbit: orbit escaped at step " << i << "\n";
                status = "escaped at step " + std::to_string(i);
                break;
            }
            rows.push_back({std::to_string(i), fmt12(s.x), fmt12(s.p)});
        }
    } else {
        throw DomainError("map must be 'standard' or 'ion'");
    }
    const auto table = report.table("orbit", "step,x,y_or_p", rows);
    report.stage("map-orbit", {table}, status);
    report.write_manifest();
    return 0;
}

int cmd_sweep_k(const RunConfig& cfg) {
    RunReport report("sweep-k", cfg);
    const auto grid = make_k_grid(cfg);
    const auto sizes = sweep_sizes(cfg);
    const auto records = sweep_gap_vs_k(grid, sizes, cfg.nu, sweep_settings(cfg),
                                        [](const SweepRecord& r) {
                                            std::cerr << "sweep-k: N=" << r.n_ions
                                                      << " K=" << fmt12(r.k)
                                                      << " omega0=" << fmt12(r.omega0) << "\n";
                                        });
    const auto table = report.table("sweep", "K,N,omega_tr,omega0,energy,n_minima,converged",
                                    sweep_rows(records));
    std::vector<std::string> outputs = {table};
    if (cfg.plot) {
        plot_sweep(records, report.out_dir() / "gap_vs_k.svg");
        outputs.push_back("gap_vs_k.svg");
    }
    report.stage("sweep", outputs);
    report.write_manifest();
    return 0;
}

int cmd_find_kc(const RunConfig& cfg) {
    RunReport report("find-kc", cfg);
    std::vector<SweepRecord> records;
    if (!cfg.in.empty()) {
        records = load_sweep_csv(cfg.in);
        report.stage("load-sweep", {}, "ok (" + std::to_string(records.size()) + " records)");
    } else {
        records = sweep_gap_vs_k(make_k_grid(cfg), sweep_sizes(cfg), cfg.nu, sweep_settings(cfg));
        const auto table = report.table(
            "sweep", "K,N,omega_tr,omega0,energy,n_minima,converged", sweep_rows(records));
        report.stage("sweep", {table});
    }
    const TransitionEstimate est = estimate_kc(records, parse_method(cfg.method));
    std::vector<std::vector<std::string>> rows = {
        {cfg.method, est.found ? fmt12(est.k_c) : "nan",
         transition_details_json(est).dump()}};
    const auto table = report.table("transition", "method,k_c,detail_json", rows);
    std::cout << (est.found ? fmt12(est.k_c) : "nan") << std::endl;
    report.stage("estimate", {table}, est.found ? "ok" : "no-transition");
    report.write_manifest();
    return 0;
}

int cmd_kc_scaling(const RunConfig& cfg) {
    RunReport report("kc-scaling", cfg);
    const ScalingFit fit = kc_scaling_scan(cfg.nu_list, cfg.n_pair, sweep_settings(cfg));
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : fit.points)
        rows.push_back({fmt12(p.nu), fmt12(p.k_c), p.found ? "1" : "0"});
    const auto table = report.table("scaling", "nu,k_c,found", rows);

    json j;
    j["exponent"] = fit.exponent;
    j["prefactor"] = std::exp(fit.log_prefactor);
    std::ofstream out(report.out_dir() / "scaling_fit.json", std::ios::binary);
    out << j.dump(2) << '\n';
    std::cout << j.dump(2) << std::endl;

    std::vector<std::string> outputs = {table, "scaling_fit.json"};
    if (cfg.plot) {
        PlotSeries measured;
        measured.label = "measured";
        PlotSeries theory;
        theory.label = "fit";
        for (const auto& p : fit.points) {
            if (!p.found)
                continue;
            measured.points.emplace_back(p.nu, p.k_c);
            theory.points.emplace_back(p.nu,
                                       std::exp(fit.log_prefactor) * std::pow(p.nu, fit.exponent));
        }
        PlotOptions opt;
        opt.x_label = "nu";
        opt.y_label = "K_c";
        opt.log_x = true;
        opt.log_y = true;
        write_svg_plot({measured, theory}, opt, report.out_dir() / "kc_scaling.svg");
        outputs.push_back("kc_scaling.svg");
    }
    report.stage("kc-scaling", outputs);
    report.write_manifest();
    return 0;
}

int cmd_minima(const RunConfig& cfg) {
    RunReport report("minima", cfg);
    const auto records = minima_statistics(cfg.k_list, cfg.n_list, cfg.nu, sweep_settings(cfg));
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : records)
        rows.push_back({fmt12(r.k), std::to_string(r.n_ions), std::to_string(r.n_distinct),
                        fmt12(r.delta_e1), fmt12(r.delta_e_median)});
    const auto table = report.table("minima", "K,N,n_distinct,delta_e1,delta_e_median", rows);
    report.stage("minima", {table});
    report.write_manifest();
    return 0;
}

int cmd_disorder(const RunConfig& cfg) {
    RunReport report("disorder", cfg);
    DisorderParams base;
    base.mean_spacing = cfg.mean_spacing;
    base.relative_halfwidth = cfg.halfwidth;
    base.trap_stiffness = cfg.kappa;
    base.seed = cfg.seed;
    const auto records =
        disorder_localization(cfg.n_list, base, cfg.n_seeds, sweep_settings(cfg));
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : records)
        rows.push_back({std::to_string(r.n_ions), std::to_string(r.seed_index),
                        fmt12(r.min_omega), fmt12(r.pr_median), fmt12(r.pr_q25),
                        fmt12(r.pr_q75)});
    const auto table =
        report.table("disorder", "N,seed,min_omega,pr_median,pr_q25,pr_q75", rows);
    report.stage("disorder", {table});
    report.write_manifest();
    return 0;
}

} // namespace ionchain::cli
