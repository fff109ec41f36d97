#include "ionchain/experiments.hpp"

#include "ionchain/errors.hpp"
#include "ionchain/maps.hpp"
#include "ionchain/numerics.hpp"
#include "ionchain/parallel.hpp"
#include "ionchain/phonons.hpp"
#include "ionchain/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>

namespace ionchain {

namespace {
constexpr double kCollapseThreshold = 0.05;
constexpr double kGapFloorFactor = 3.0;
constexpr double kDistinctTolerance = 1e-4;
}

std::vector<double> default_k_grid() {
    constexpr double lo = 0.005, hi = 0.3;
    constexpr int points = 24;
    std::vector<double> grid;
    grid.reserve(2 * points);
    for (int i = 0; i < points; ++i)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    // densify 2x around the transition window by inserting geometric midpoints
    std::vector<double> dense;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        dense.push_back(grid[i]);
        if (grid[i] >= 0.03 && grid[i + 1] <= 0.08)
            dense.push_back(std::sqrt(grid[i] * grid[i + 1]));
    }
    dense.push_back(grid.back());
    return dense;
}

namespace {

bool distinct_positions(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        return true;
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        diff = std::max(diff, std::abs(a[i] - b[i]));
    return diff > kDistinctTolerance;
}

/** One N series of the sweep: calibrate once, then walk the K grid in both
    directions. The upward pass warm-starts each point from its left neighbor
    plus one fresh seeded start; the downward pass carries the pinned branch
    back from large K. Sweeping only upward leaves chains stranded on the
    sliding branch above the transition (hysteresis), which softens the gap
    curve exactly where the transition estimate reads it; the min-energy
    envelope of both passes closes the loop.
*/
std::vector<SweepRecord> sweep_series(std::span<const double> k_grid, int n, double nu,
                                      const SweepSettings& settings) {
    const CalibrationResult cal =
        calibrate_trap(n, nu, k_grid.front(), settings.density_tolerance, settings.relax);
    if (!cal.ok)
        throw DomainError("sweep_gap_vs_k: trap calibration failed");
    const double omega = cal.omega_tr;

    const RelaxSettings relax_settings = settings.relax;
    const std::size_t n_k = k_grid.size();
    std::vector<std::optional<IonConfiguration>> best(n_k);
    std::vector<int> n_found(n_k, 0);

    auto offer = [&](std::size_t ki, IonConfiguration&& c) {
        if (!c.converged)
            return;
        if (!best[ki]) {
            best[ki] = std::move(c);
            n_found[ki] = 1;
            return;
        }
        if (distinct_positions(best[ki]->positions, c.positions))
            ++n_found[ki];
        if (c.energy < best[ki]->energy)
            best[ki] = std::move(c);
    };

    std::vector<double> warm;
    for (std::size_t ki = 0; ki < n_k; ++ki) {
        const ChainParams params = ChainParams::periodic(n, omega, k_grid[ki]);
        const std::uint64_t point_seed =
            derive_seed(settings.relax.seed, static_cast<std::uint64_t>(n), ki);
        if (!warm.empty())
            offer(ki, relax(params, warm, relax_settings));
        const std::vector<double> fresh =
            ki == 0 ? initial_guess(params, nu)
                    : perturbed_start(initial_guess(params, nu),
                                      settings.relax.perturbation_scale, point_seed);
        offer(ki, relax(params, fresh, relax_settings));
        if (best[ki])
            warm = best[ki]->positions;
    }
    warm.clear();
    for (std::size_t r = 0; r < n_k; ++r) {
        const std::size_t ki = n_k - 1 - r;
        const ChainParams params = ChainParams::periodic(n, omega, k_grid[ki]);
        if (!warm.empty())
            offer(ki, relax(params, warm, relax_settings));
        if (best[ki])
            warm = best[ki]->positions;
    }

    std::vector<SweepRecord> series;
    series.reserve(n_k);
    for (std::size_t ki = 0; ki < n_k; ++ki) {
        SweepRecord rec;
        rec.k = k_grid[ki];
        rec.n_ions = n;
        rec.omega_tr = omega;
        rec.seed = derive_seed(settings.relax.seed, static_cast<std::uint64_t>(n), ki);
        if (!best[ki]) {
            rec.omega0 = std::numeric_limits<double>::quiet_NaN();
            rec.energy = std::numeric_limits<double>::quiet_NaN();
            rec.converged = false;
        } else {
            const ChainParams params = ChainParams::periodic(n, omega, k_grid[ki]);
            const PhononSpectrum spec = spectrum(params, *best[ki]);
            rec.omega0 = spec.frequencies.front();
            rec.energy = best[ki]->energy;
            rec.n_distinct_minima = n_found[ki];
            rec.converged = true;
        }
        series.push_back(rec);
    }
    return series;
}

} // namespace

std::vector<SweepRecord> sweep_gap_vs_k(std::span<const double> k_grid,
                                        std::span<const int> n_list, double nu,
                                        const SweepSettings& settings,
                                        const SweepCallback& on_record) {
    if (k_grid.empty() || n_list.empty())
        throw DomainError("sweep_gap_vs_k: empty grid");
    if (!std::is_sorted(k_grid.begin(), k_grid.end()))
        throw DomainError("sweep_gap_vs_k: K grid must be sorted ascending");

    std::vector<std::vector<SweepRecord>> per_n(n_list.size());
    parallel_for(n_list.size(), settings.threads, [&](std::size_t i) {
        per_n[i] = sweep_series(k_grid, n_list[i], nu, settings);
    });

    std::vector<SweepRecord> records;
    records.reserve(n_list.size() * k_grid.size());
    for (const auto& series : per_n)
        for (const auto& rec : series) {
            records.push_back(rec);
            if (on_record)
                on_record(rec);
        }
    return records;
}

TransitionEstimate estimate_kc(std::span<const SweepRecord> records, TransitionMethod method) {
    std::set<int> sizes;
    for (const auto& r : records)
        sizes.insert(r.n_ions);
    if (sizes.size() < 2)
        throw DomainError("estimate_kc: records must span at least two chain sizes");

    std::map<double, std::vector<const SweepRecord*>> by_k;
    for (const auto& r : records)
        by_k[r.k].push_back(&r);

    TransitionEstimate est;
    est.method = method;
    for (const auto& [k, recs] : by_k) {
        if (recs.size() < 2)
            continue;
        if (!std::all_of(recs.begin(), recs.end(), [](const SweepRecord* r) { return r->converged; }))
            continue;
        double w_min = std::numeric_limits<double>::infinity();
        double w_max = 0.0;
        double tr_max = 0.0;
        double margin = std::numeric_limits<double>::infinity();
        for (const SweepRecord* r : recs) {
            w_min = std::min(w_min, r->omega0);
            w_max = std::max(w_max, r->omega0);
            tr_max = std::max(tr_max, r->omega_tr);
            margin = std::min(margin, r->omega0 / (kGapFloorFactor * r->omega_tr));
        }
        KCollapseDetail d;
        d.k = k;
        d.collapse = w_max > 0.0 ? (w_max - w_min) / w_max : 0.0;
        d.min_omega0 = w_min;
        d.gap_floor = kGapFloorFactor * tr_max;
        d.floor_margin = margin;
        d.pass = method == TransitionMethod::NCollapse
                     ? (d.collapse < kCollapseThreshold && w_min > d.gap_floor)
                     : margin > 1.0;
        est.details.push_back(d);
        if (d.pass && !est.found) {
            est.found = true;
            est.k_c = k;
            // GapThreshold: the margin rises steeply through the transition,
            // so the first passing grid point can overshoot by a whole grid
            // step; place K_c at the unit crossing of the margin instead,
            // interpolated in log-log between the neighboring grid points.
            if (method == TransitionMethod::GapThreshold && est.details.size() >= 2) {
                const KCollapseDetail& prev = est.details[est.details.size() - 2];
                if (prev.floor_margin > 0.0 && prev.floor_margin <= 1.0) {
                    const double frac = std::log(1.0 / prev.floor_margin) /
                                        std::log(d.floor_margin / prev.floor_margin);
                    est.k_c = prev.k * std::pow(d.k / prev.k, frac);
                }
            }
        }
    }
    return est;
}

ScalingFit fit_power_law(std::span<const DensityScalingPoint> points) {
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        if (!p.found)
            continue;
        lx.push_back(std::log(p.nu));
        ly.push_back(std::log(p.k_c));
    }
    if (lx.size() < 3)
        throw DomainError("fit_power_law: need at least three located transitions");
    const LineFit fit = fit_line(lx, ly);
    ScalingFit out;
    out.exponent = fit.slope;
    out.log_prefactor = fit.intercept;
    out.points.assign(points.begin(), points.end());
    return out;
}

namespace {

std::vector<double> scaled_k_grid(double nu) {
    // 24 log-spaced multipliers of the theoretical threshold, wide enough to
    // straddle the transition with ~13% resolution.
    const double kc = k_c_theory(nu);
    std::vector<double> grid;
    for (int i = 0; i < 24; ++i)
        grid.push_back(kc * 0.25 * std::pow(16.0, static_cast<double>(i) / 23.0));
    return grid;
}

} // namespace

ScalingFit kc_scaling_scan(std::span<const double> nu_list, std::span<const int> n_pair,
                           const SweepSettings& settings, const SweepCallback& on_record) {
    if (nu_list.size() < 2)
        throw DomainError("kc_scaling_scan: need at least two densities");
    const double lo = *std::min_element(nu_list.begin(), nu_list.end());
    const double hi = *std::max_element(nu_list.begin(), nu_list.end());
    if (!(hi >= 2.0 * lo))
        throw DomainError("kc_scaling_scan: density list must span at least a factor 2");

    std::vector<DensityScalingPoint> points(nu_list.size());
    for (std::size_t i = 0; i < nu_list.size(); ++i) {
        const double nu = nu_list[i];
        const auto grid = scaled_k_grid(nu);
        const auto records = sweep_gap_vs_k(grid, n_pair, nu, settings, on_record);
        const TransitionEstimate est = estimate_kc(records);
        points[i] = DensityScalingPoint{nu, est.k_c, est.found};
    }
    return fit_power_law(points);
}

std::vector<MinimaRecord> minima_statistics(std::span<const double> k_list,
                                            std::span<const int> n_list, double nu,
                                            const SweepSettings& settings) {
    if (settings.relax.n_starts < 50)
        throw DomainError("minima_statistics: need n_starts >= 50");

    struct Point {
        double k;
        int n;
    };
    std::vector<Point> grid;
    for (int n : n_list)
        for (double k : k_list)
            grid.push_back({k, n});

    // one calibration per chain size, at a small sliding-phase amplitude
    std::map<int, double> omega_by_n;
    for (int n : n_list) {
        if (!omega_by_n.count(n)) {
            const CalibrationResult cal =
                calibrate_trap(n, nu, 0.03, settings.density_tolerance, settings.relax);
            if (!cal.ok)
                throw DomainError("minima_statistics: trap calibration failed");
            omega_by_n[n] = cal.omega_tr;
        }
    }

    std::vector<MinimaRecord> records(grid.size());
    parallel_for(grid.size(), settings.threads, [&](std::size_t i) {
        const auto [k, n] = grid[i];
        const ChainParams params = ChainParams::periodic(n, omega_by_n.at(n), k);
        RelaxSettings rs = settings.relax;
        rs.seed = derive_seed(settings.relax.seed, static_cast<std::uint64_t>(n), i);
        const GroundStateResult result = ground_state(params, rs, nu);
        MinimaRecord rec;
        rec.k = k;
        rec.n_ions = n;
        rec.omega_tr = omega_by_n.at(n);
        rec.n_distinct = result.catalog.n_distinct;
        if (result.catalog.energy_gaps.size() > 1) {
            rec.delta_e1 = result.catalog.energy_gaps[1];
            rec.delta_e_median = median(std::vector<double>(result.catalog.energy_gaps.begin() + 1,
                                                            result.catalog.energy_gaps.end()));
        }
        records[i] = rec;
    });
    return records;
}

std::vector<DisorderRecord> disorder_localization(std::span<const int> n_list,
                                                  const DisorderParams& base, int n_seeds,
                                                  const SweepSettings& settings) {
    if (n_seeds < 1)
        throw DomainError("disorder_localization: need at least one seed");

    struct Task {
        int n;
        int seed_index;
    };
    std::vector<Task> tasks;
    for (int n : n_list)
        for (int s = 0; s < n_seeds; ++s)
            tasks.push_back({n, s});

    std::vector<DisorderRecord> records(tasks.size());
    parallel_for(tasks.size(), settings.threads, [&](std::size_t i) {
        const auto [n, s] = tasks[i];
        DisorderParams dp = base;
        dp.seed = derive_seed(base.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s));
        const ChainParams params = ChainParams::microtraps(n, dp);
        const IonConfiguration config =
            relax(params, trap_centers(dp, n), settings.relax);
        if (!config.converged)
            throw std::runtime_error("disorder_localization: relaxation did not converge");
        const PhononSpectrum spec = spectrum(params, config);
        DisorderRecord rec;
        rec.n_ions = n;
        rec.seed_index = static_cast<std::uint64_t>(s);
        rec.min_omega = spec.frequencies.front();
        rec.pr_median = median(spec.participation_ratios);
        rec.pr_q25 = quantile(spec.participation_ratios, 0.25);
        rec.pr_q75 = quantile(spec.participation_ratios, 0.75);
        records[i] = rec;
    });
    return records;
}

std::vector<DisorderSummary> summarize_disorder(std::span<const DisorderRecord> records) {
    std::map<int, std::vector<const DisorderRecord*>> by_n;
    for (const auto& r : records)
        by_n[r.n_ions].push_back(&r);
    std::vector<DisorderSummary> summaries;
    for (const auto& [n, recs] : by_n) {
        DisorderSummary s;
        s.n_ions = n;
        std::vector<double> medians;
        s.min_omega_low = std::numeric_limits<double>::infinity();
        s.min_omega_high = 0.0;
        for (const DisorderRecord* r : recs) {
            medians.push_back(r->pr_median);
            s.min_omega_low = std::min(s.min_omega_low, r->min_omega);
            s.min_omega_high = std::max(s.min_omega_high, r->min_omega);
        }
        s.pr_median = median(medians);
        summaries.push_back(s);
    }
    return summaries;
}

} // namespace ionchain
