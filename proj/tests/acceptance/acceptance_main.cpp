// Acceptance suite: one criterion per function, one pass/fail line each.
// Exit code is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ionchain/chain_model.hpp"
#include "ionchain/experiments.hpp"
#include "ionchain/ground_state.hpp"
#include "ionchain/maps.hpp"
#include "ionchain/numerics.hpp"
#include "ionchain/phonons.hpp"
#include "ionchain/rng.hpp"
#include "ionchain/units.hpp"

using namespace ionchain;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

int g_threads = 2;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

/// Best configuration at amplitude k: warm continuation from below, warm
/// continuation from above, and a fresh multi-start, lowest energy wins.
IonConfiguration best_state(int n, double omega, double k, int fresh_starts = 5) {
    const RelaxSettings rs;
    std::vector<IonConfiguration> candidates;

    std::vector<double> warm;
    for (int i = 0; i < 16; ++i) {
        const double ki = 0.005 * std::pow(k / 0.005, i / 15.0);
        const ChainParams q = ChainParams::periodic(n, omega, ki);
        const auto start = warm.empty() ? initial_guess(q, golden_mean) : warm;
        const auto c = relax(q, start, rs);
        if (c.converged)
            warm = c.positions;
    }
    const ChainParams params = ChainParams::periodic(n, omega, k);
    if (!warm.empty())
        candidates.push_back(relax(params, warm, rs));

    if (k < 0.3) {
        std::vector<double> warm_down;
        for (int i = 0; i < 10; ++i) {
            const double ki = 0.3 * std::pow(k / 0.3, i / 9.0);
            const ChainParams q = ChainParams::periodic(n, omega, ki);
            const auto start = warm_down.empty() ? initial_guess(q, golden_mean) : warm_down;
            const auto c = relax(q, start, rs);
            if (c.converged)
                warm_down = c.positions;
        }
        if (!warm_down.empty())
            candidates.push_back(relax(params, warm_down, rs));
    }

    RelaxSettings multi = rs;
    multi.n_starts = fresh_starts;
    const auto g = ground_state(params, multi, golden_mean);
    if (g.best)
        candidates.push_back(*g.best);

    std::optional<IonConfiguration> best;
    for (auto& c : candidates)
        if (c.converged && (!best || c.energy < best->energy))
            best = std::move(c);
    if (!best)
        throw std::runtime_error("best_state: nothing converged");
    return *best;
}

// 1. Sliding spectrum is near-acoustic at K=0.03, pinned and gapped at K=0.2.
Result criterion_1() {
    const int n = 50;
    const double omega = 0.014;

    const auto sliding = best_state(n, omega, 0.03);
    const ChainParams p_slide = ChainParams::periodic(n, omega, 0.03);
    const auto spec = spectrum(p_slide, sliding);
    const double w0_slide = spec.frequencies.front();
    const AcousticFit fit = fit_acoustic(spec);

    const auto pinned = best_state(n, omega, 0.2);
    const ChainParams p_pin = ChainParams::periodic(n, omega, 0.2);
    const auto spec_pin = spectrum(p_pin, pinned);
    const double w0_pin = spec_pin.frequencies.front();
    const AcousticFit fit_pin = fit_acoustic(spec_pin);

    Result r;
    r.pass = w0_slide <= 0.05 && fit.sound_velocity >= 0.5 && fit.sound_velocity <= 2.0 &&
             w0_pin >= 0.3;
    r.detail = "omega0(K=0.03)=" + fmt("%.4f", w0_slide) + " (<=0.05), C_v=" +
               fmt("%.3f", fit.sound_velocity) + " (in [0.5,2]), omega0(K=0.2)=" +
               fmt("%.4f", w0_pin) + " (>=0.3), pinned intercept=" +
               fmt("%.3f", fit_pin.intercept);
    return r;
}

// 2. Gap curves: size-dependent below the transition, size-free above, and
//    the transition estimate brackets the reference value.
Result criterion_2(bool extended) {
    SweepSettings settings;
    settings.threads = g_threads;
    const auto grid = default_k_grid();
    std::vector<int> sizes = {50, 150};
    if (extended)
        sizes.push_back(300);
    const auto records = sweep_gap_vs_k(grid, sizes, golden_mean, settings);

    const std::size_t nk = grid.size();
    auto omega0 = [&](std::size_t size_index, std::size_t ki) {
        return records[size_index * nk + ki].omega0;
    };

    bool soft_below = true;
    for (std::size_t ki = 0; ki < nk; ++ki)
        if (grid[ki] < 0.02 && !(omega0(1, ki) / omega0(0, ki) < 0.7))
            soft_below = false;

    double worst_above = 0.0;
    for (std::size_t ki = 0; ki < nk; ++ki) {
        if (grid[ki] <= 0.1)
            continue;
        double lo = 1e300, hi = 0.0;
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            lo = std::min(lo, omega0(si, ki));
            hi = std::max(hi, omega0(si, ki));
        }
        worst_above = std::max(worst_above, (hi - lo) / hi);
    }

    const TransitionEstimate est = estimate_kc(records);

    Result r;
    r.pass = soft_below && worst_above < 0.10 && est.found && est.k_c >= 0.035 && est.k_c <= 0.06;
    r.detail = std::string("gap shrinks with N below K=0.02: ") + (soft_below ? "yes" : "no") +
               ", worst N-spread above K=0.1: " + fmt("%.3f", worst_above) +
               " (<0.10), K_c=" + (est.found ? fmt("%.4f", est.k_c) : "none") +
               " (in [0.035,0.06])" + (extended ? " [N=50,150,300]" : " [N=50,150]");
    return r;
}

// 3. Trap calibration reproduces the reference (N, omega_tr) pairs.
Result criterion_3() {
    const std::vector<std::pair<int, double>> reference = {
        {50, 0.014}, {150, 0.00528}, {300, 0.00281}};
    Result r;
    r.pass = true;
    for (const auto& [n, omega_ref] : reference) {
        const CalibrationResult cal = calibrate_trap(n, golden_mean, 0.005, 0.005);
        const bool ok = cal.ok && std::abs(cal.omega_tr - omega_ref) <= 0.2 * omega_ref &&
                        std::abs(cal.density - golden_mean) <= 0.005 * golden_mean;
        r.pass = r.pass && ok;
        r.detail += "N=" + std::to_string(n) + ": omega=" +
                    (cal.ok ? fmt("%.5f", cal.omega_tr) : "fail") + " vs " +
                    fmt("%.5f", omega_ref) + " density=" + fmt("%.4f", cal.density) + "; ";
    }
    r.detail += "(each within 20%, density within 0.5%)";
    return r;
}

// 4. Transition amplitude scales as the cube of the density.
Result criterion_4() {
    SweepSettings settings;
    settings.threads = g_threads;
    const std::vector<double> nus = {1.0, 1.3, 1.618, 2.0, 2.6};
    const std::vector<int> pair = {50, 100};
    const ScalingFit fit = kc_scaling_scan(nus, pair, settings);
    double kc_golden = 0.0;
    for (const auto& p : fit.points)
        if (std::abs(p.nu - 1.618) < 1e-9 && p.found)
            kc_golden = p.k_c;
    Result r;
    r.pass = std::abs(fit.exponent - 3.0) <= 0.5 && kc_golden >= 0.03 && kc_golden <= 0.06;
    r.detail = "exponent=" + fmt("%.3f", fit.exponent) + " (3 +- 0.5), K_c(nu_g)=" +
               fmt("%.4f", kc_golden) + " (in [0.03,0.06])";
    return r;
}

// 5. Analytic oracles: two-ion modes, COM decoupling, finite differences.
Result criterion_5() {
    Result r;
    r.pass = true;

    const double omega = 0.014;
    {
        const ChainParams p = ChainParams::periodic(2, omega, 0.0);
        const auto c = relax(p, initial_guess(p, golden_mean), RelaxSettings{});
        const auto spec = spectrum(p, c);
        const bool ok = std::abs(spec.frequencies[0] - omega) < 1e-8 &&
                        std::abs(spec.frequencies[1] - std::sqrt(3.0) * omega) < 1e-8;
        r.pass = r.pass && ok;
        r.detail += std::string("two-ion modes: ") + (ok ? "ok" : "FAIL") + "; ";
    }

    for (int n : {50, 150, 300}) {
        const double w = n == 50 ? 0.014 : (n == 150 ? 0.00528 : 0.00281);
        const ChainParams p = ChainParams::periodic(n, w, 0.0);
        const auto c = relax(p, initial_guess(p, golden_mean), RelaxSettings{});
        const auto spec = spectrum(p, c);
        double overlap = 0.0;
        for (int i = 0; i < n; ++i)
            overlap += spec.modes(i, 0) / std::sqrt(static_cast<double>(n));
        const bool ok = std::abs(spec.frequencies.front() - w) < 1e-8 && std::abs(overlap) > 0.999;
        r.pass = r.pass && ok;
        if (!ok)
            r.detail += "COM N=" + std::to_string(n) + " FAIL; ";
    }
    r.detail += "COM mode exact for N in {50,150,300}; ";

    SplitMix64 rng(2026);
    double worst_grad = 0.0, worst_hess = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 11);
        std::vector<double> x(static_cast<std::size_t>(n));
        double pos = 0.0;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = pos;
            pos += rng.uniform(2.0, 6.0);
        }
        const double mid = 0.5 * (x.front() + x.back());
        for (double& xi : x)
            xi -= mid;
        const ChainParams p =
            ChainParams::periodic(n, rng.uniform(0.005, 0.02), rng.uniform(0.0, 0.3));

        const auto g = gradient(p, x);
        const double gref = inf_norm(g);
        std::vector<double> probe = x;
        for (int i = 0; i < n; ++i) {
            const double h = 1e-6;
            probe[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h;
            const double ep = energy(p, probe);
            probe[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - h;
            const double em = energy(p, probe);
            probe[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
            worst_grad = std::max(
                worst_grad, std::abs((ep - em) / (2.0 * h) - g[static_cast<std::size_t>(i)]) / gref);
        }

        const Eigen::MatrixXd hess_an = hessian(p, x);
        const double scale = hess_an.cwiseAbs().maxCoeff();
        for (int j = 0; j < n; ++j) {
            const double h = 1e-5;
            probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + h;
            const auto gp = gradient(p, probe);
            probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - h;
            const auto gm = gradient(p, probe);
            probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
            for (int i = 0; i < n; ++i)
                worst_hess = std::max(
                    worst_hess,
                    std::abs((gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) /
                                 (2.0 * h) -
                             hess_an(i, j)) /
                        scale);
        }
    }
    const bool fd_ok = worst_grad < 1e-6 && worst_hess < 1e-5;
    r.pass = r.pass && fd_ok;
    r.detail += "FD gradient err=" + fmt("%.2e", worst_grad) + " (<1e-6), FD hessian err=" +
                fmt("%.2e", worst_hess) + " (<1e-5) over 100 random configurations";
    return r;
}

// 6. The equilibrium map reconstructs the relaxed chain's central third.
Result criterion_6() {
    const int n = 50;
    const auto ref = best_state(n, 0.014, 0.1);
    const int lo = n / 3, hi = 2 * n / 3;
    const std::span<const double> segment(ref.positions.data() + lo,
                                          static_cast<std::size_t>(hi - lo));
    const auto rec = ion_map_segment(segment, 0.1);
    double worst = 0.0;
    CompensatedSum sq;
    int count = 0;
    for (std::size_t i = 1; i < segment.size(); ++i) {
        const double s_ref = segment[i] - segment[i - 1];
        const double s_map = rec[i] - rec[i - 1];
        const double dev = std::abs(s_map - s_ref) / s_ref;
        worst = std::max(worst, dev);
        sq.add(dev * dev);
        ++count;
    }
    const double rms = std::sqrt(sq.value() / count);
    Result r;
    r.pass = rms <= 0.05;
    r.detail = "central-third spacing deviation: rms=" + fmt("%.4f", rms) +
               " (<=0.05), worst=" + fmt("%.4f", worst) + ", density=" +
               fmt("%.4f", central_density(ref));
    return r;
}

// 7. Standard-map chaos border: bounded below, diffusive above, symplectic.
Result criterion_7() {
    StandardMapState s{0.1, 0.05};
    double max_y = 0.0;
    for (int i = 0; i < 100000; ++i) {
        s = standard_map_step(s, 0.5);
        max_y = std::max(max_y, std::abs(s.y));
    }
    const bool bounded = max_y < std::numbers::pi;

    const int n_orbits = 192;
    std::vector<StandardMapState> ensemble;
    for (int j = 0; j < n_orbits; ++j)
        ensemble.push_back({2.0 * std::numbers::pi * (j + 0.5) / n_orbits, 0.05});
    const std::vector<int> checkpoints = {100, 1000, 10000, 100000};
    std::vector<double> lt, lv;
    int step = 0;
    for (int target : checkpoints) {
        for (; step < target; ++step)
            for (auto& o : ensemble)
                o = standard_map_step(o, 2.0);
        CompensatedSum sum, sum2;
        for (const auto& o : ensemble) {
            sum.add(o.y);
            sum2.add(o.y * o.y);
        }
        const double mean = sum.value() / n_orbits;
        lt.push_back(std::log(static_cast<double>(target)));
        lv.push_back(std::log(sum2.value() / n_orbits - mean * mean));
    }
    const double slope = fit_line(lt, lv).slope;
    const bool diffusive = slope > 0.7 && slope < 1.3;

    SplitMix64 rng(11);
    double worst_det = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const StandardMapState p{rng.uniform(-10.0, 10.0), rng.uniform(-5.0, 5.0)};
        worst_det = std::max(
            worst_det, std::abs(standard_map_jacobian_det(p, rng.uniform(0.0, 3.0)) - 1.0));
    }
    const bool symplectic = worst_det < 1e-12;

    Result r;
    r.pass = bounded && diffusive && symplectic;
    r.detail = "max|y|(K_eff=0.5)=" + fmt("%.3f", max_y) + " (<pi), variance slope(K_eff=2)=" +
               fmt("%.2f", slope) + " (~1), max|detJ-1|=" + fmt("%.1e", worst_det) + " (<1e-12)";
    return r;
}

// 8. Quasi-degenerate minima in the pinned phase; a single one without lattice.
Result criterion_8() {
    const ChainParams pinned = ChainParams::periodic(50, 0.014, 0.2);
    RelaxSettings settings;
    settings.n_starts = 100;
    const auto g = ground_state(pinned, settings, golden_mean);
    const int n_s = g.catalog.n_distinct;
    const double gap_rel = g.catalog.energy_gaps.size() > 1
                               ? g.catalog.energy_gaps[1] / std::abs(g.best->energy)
                               : 1.0;

    const ChainParams free = ChainParams::periodic(50, 0.014, 0.0);
    const auto g0 = ground_state(free, settings, golden_mean);

    Result r;
    r.pass = n_s >= 10 && gap_rel < 1e-3 && g0.catalog.n_distinct == 1;
    r.detail = "N_s(K=0.2)=" + std::to_string(n_s) + " (>=10), dE1/|E0|=" + fmt("%.2e", gap_rel) +
               " (<1e-3), N_s(K=0)=" + std::to_string(g0.catalog.n_distinct) + " (=1)";
    return r;
}

// 9. Disordered microtraps: localized modes, size-free spectral floor.
Result criterion_9() {
    SweepSettings settings;
    settings.threads = g_threads;
    const std::vector<int> sizes = {50, 100, 200};

    DisorderParams rough;  // w = 0.25 defaults
    const auto rough_sum = summarize_disorder(disorder_localization(sizes, rough, 10, settings));
    const double r1 = rough_sum[1].pr_median / rough_sum[0].pr_median;
    const double r2 = rough_sum[2].pr_median / rough_sum[1].pr_median;

    DisorderParams clean;
    clean.relative_halfwidth = 0.0;
    const auto clean_sum = summarize_disorder(disorder_localization(sizes, clean, 3, settings));
    const double c1 = clean_sum[1].pr_median / clean_sum[0].pr_median;
    const double c2 = clean_sum[2].pr_median / clean_sum[1].pr_median;

    double w_lo = 1e300, w_hi = 0.0;
    for (const auto& s : rough_sum) {
        w_lo = std::min(w_lo, s.min_omega_low);
        w_hi = std::max(w_hi, s.min_omega_high);
    }
    const double floor_spread = (w_hi - w_lo) / w_hi;

    Result r;
    r.pass = r1 < 1.3 && r2 < 1.3 && c1 > 1.6 && c1 < 2.4 && c2 > 1.6 && c2 < 2.4 &&
             floor_spread < 0.15 && w_lo > 0.0;
    r.detail = "disordered PR ratios " + fmt("%.2f", r1) + ", " + fmt("%.2f", r2) +
               " (<1.3); clean PR ratios " + fmt("%.2f", c1) + ", " + fmt("%.2f", c2) +
               " (~2); min-frequency spread " + fmt("%.3f", floor_spread) + " (<0.15)";
    return r;
}

// 10. Physical unit estimates.
Result criterion_10() {
    PhysicalInputs in;
    in.lattice_period_m = 1e-6;
    in.ion_mass_kg = mass_kg_from_amu(40.0);
    const UnitScales s = derive_scales(in);
    const double depth = pinning_depth_kelvin(s, 0.034);
    Result r;
    r.pass = s.hbar_eff > 1e-6 && s.hbar_eff < 1e-4 && depth > 1.5 && depth < 6.0;
    r.detail = "hbar_eff=" + fmt("%.2e", s.hbar_eff) + " (order 1e-5), pinning depth=" +
               fmt("%.2f", depth) + " K (within factor 2 of 3 K)";
    return r;
}

} // namespace

int main(int argc, char** argv) {
    bool extended = false;
    std::vector<int> only;
    std::vector<int> skip;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--extended") {
            extended = true;
        } else if (arg == "--threads" && i + 1 < argc) {
            g_threads = std::atoi(argv[++i]);
        } else if (arg == "--only" && i + 1 < argc) {
            for (const char* tok = std::strtok(argv[++i], ","); tok; tok = std::strtok(nullptr, ","))
                only.push_back(std::atoi(tok));
        } else if (arg == "--skip" && i + 1 < argc) {
            for (const char* tok = std::strtok(argv[++i], ","); tok; tok = std::strtok(nullptr, ","))
                skip.push_back(std::atoi(tok));
        } else if (arg == "--skip-scaling") {
            skip.push_back(4);
        } else {
            std::fprintf(stderr,
                         "usage: %s [--extended] [--threads N] [--only a,b] [--skip a,b] "
                         "[--skip-scaling]\n",
                         argv[0]);
            return 2;
        }
    }

    const std::vector<std::pair<int, std::function<Result()>>> criteria = {
        {1, criterion_1},
        {2, [&] { return criterion_2(extended); }},
        {3, criterion_3},
        {4, criterion_4},
        {5, criterion_5},
        {6, criterion_6},
        {7, criterion_7},
        {8, criterion_8},
        {9, criterion_9},
        {10, criterion_10},
    };

    int failures = 0;
    int ran = 0;
    for (const auto& [id, fn] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        if (std::find(skip.begin(), skip.end(), id) != skip.end()) {
            std::printf("[SKIP] criterion %d\n", id);
            continue;
        }
        ++ran;
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s\n", r.pass ? "PASS" : "FAIL", id, r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass)
            ++failures;
    }
    std::printf("acceptance: %d/%d passed\n", ran - failures, ran);
    return failures;
}
