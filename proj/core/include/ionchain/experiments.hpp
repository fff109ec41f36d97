#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ionchain/chain_model.hpp"
#include "ionchain/ground_state.hpp"

namespace ionchain {

struct SweepSettings {
    RelaxSettings relax{};
    double density_tolerance = 0.005;  ///< for the per-chain trap calibration
    int threads = 1;
};

/// One grid point of a (K, N) sweep.
struct SweepRecord {
    double k = 0.0;
    int n_ions = 0;
    double omega_tr = 0.0;
    double omega0 = 0.0;  ///< smallest phonon frequency (NaN when failed)
    double energy = 0.0;
    int n_distinct_minima = 0;  ///< distinct minima among this point's candidates
    std::uint64_t seed = 0;
    bool converged = false;
};

enum class TransitionMethod { NCollapse, GapThreshold };

struct KCollapseDetail {
    double k = 0.0;
    double collapse = 0.0;      ///< max pairwise |w0_a - w0_b| / max w0 across N
    double min_omega0 = 0.0;
    double gap_floor = 0.0;     ///< 3 * max omega_tr (NCollapse floor)
    double floor_margin = 0.0;  ///< min over chains of w0(N) / (3 * omega_tr(N))
    bool pass = false;
};

struct TransitionEstimate {
    bool found = false;
    double k_c = 0.0;
    TransitionMethod method = TransitionMethod::GapThreshold;
    std::vector<KCollapseDetail> details;
};

struct DensityScalingPoint {
    double nu = 0.0;
    double k_c = 0.0;
    bool found = false;
};

struct ScalingFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;  ///< fit is log k_c = exponent*log nu + log_prefactor
    std::vector<DensityScalingPoint> points;
};

struct MinimaRecord {
    double k = 0.0;
    int n_ions = 0;
    double omega_tr = 0.0;
    int n_distinct = 0;
    double delta_e1 = 0.0;       ///< E_1 - E_0 (0 when only one minimum)
    double delta_e_median = 0.0; ///< median of E_k - E_0 over k >= 1
};

struct DisorderRecord {
    int n_ions = 0;
    std::uint64_t seed_index = 0;
    double min_omega = 0.0;
    double pr_median = 0.0;
    double pr_q25 = 0.0;
    double pr_q75 = 0.0;
};

struct DisorderSummary {
    int n_ions = 0;
    double pr_median = 0.0;        ///< median over seeds of the per-seed medians
    double min_omega_low = 0.0;
    double min_omega_high = 0.0;
};

/// 24 log-spaced amplitudes in [0.005, 0.3], densified 2x inside
/// [0.03, 0.08] where the transition sits.
std::vector<double> default_k_grid();

using SweepCallback = std::function<void(const SweepRecord&)>;

/** Gap-versus-amplitude sweep. For each chain size the trap is calibrated at
    the smallest K, then the K series runs in ascending order: each point
    relaxes a warm start (previous K's configuration) and one fresh seeded
    start, keeping the lower-energy converged result. Failed points are
    recorded with converged=false and the sweep continues. Records come back
    in deterministic N-major, K-minor order regardless of the thread count.
*/
std::vector<SweepRecord> sweep_gap_vs_k(std::span<const double> k_grid,
                                        std::span<const int> n_list, double nu,
                                        const SweepSettings& settings,
                                        const SweepCallback& on_record = {});

/** Locate the pinning transition from sweep records.

    GapThreshold (default): smallest K at which every chain's gap clears 3x
    its own trap frequency, i.e. the lowest mode has detached from the trap
    scale for all sizes at once. This is the onset the transition arrow in a
    gap-versus-K plot marks, and for finite trapped chains it sits close to
    the theoretical threshold.

    NCollapse: smallest K at which the gap curves of all chain sizes agree
    pairwise within 5% while clearing 3x the largest trap frequency. For
    trapped chains the finite-size merge completes well above the transition
    (the larger chain's gap lags through the transition window), so this
    method reads high; it is kept for inspecting merge completion.

    found=false when no K qualifies.
*/
TransitionEstimate estimate_kc(std::span<const SweepRecord> records,
                               TransitionMethod method = TransitionMethod::GapThreshold);

/// Power-law fit through per-density transition points (log-log least squares
/// over the points with found=true; needs at least three).
ScalingFit fit_power_law(std::span<const DensityScalingPoint> points);

/** Transition amplitude versus density. Each density gets its own K grid
    scaled around the theoretical threshold, a sweep over n_pair chain sizes,
    and an NCollapse estimate; the cubic law is then fit in log-log space.
*/
ScalingFit kc_scaling_scan(std::span<const double> nu_list, std::span<const int> n_pair,
                           const SweepSettings& settings, const SweepCallback& on_record = {});

/// Multi-start minima statistics per (K, N) grid point. Requires
/// settings.relax.n_starts >= 50.
std::vector<MinimaRecord> minima_statistics(std::span<const double> k_list,
                                            std::span<const int> n_list, double nu,
                                            const SweepSettings& settings);

/** Disordered-microtrap localization study: for every chain size and seed,
    relax from the trap centers, take the spectrum, and record the minimum
    frequency plus participation-ratio quartiles.
*/
std::vector<DisorderRecord> disorder_localization(std::span<const int> n_list,
                                                  const DisorderParams& base, int n_seeds,
                                                  const SweepSettings& settings);

std::vector<DisorderSummary> summarize_disorder(std::span<const DisorderRecord> records);

} // namespace ionchain
