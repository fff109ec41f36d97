#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ionchain/chain_model.hpp"

namespace ionchain {

struct RelaxSettings {
    double grad_tolerance = 1e-10;  ///< convergence threshold, infinity norm
    int max_iterations = 200000;
    int n_starts = 20;              ///< multi-start count for ground_state
    double perturbation_scale = 0.3;///< half-width of the uniform start kicks
    std::uint64_t seed = 0;
};

/** Catalog of distinct local minima found by a multi-start search, sorted by
    energy. Two configurations count as distinct when their position arrays
    differ by more than 1e-4 anywhere (separates genuine lattice-well
    rearrangements from numerical noise).
*/
struct MinimaCatalog {
    std::vector<IonConfiguration> configurations;
    int n_distinct = 0;
    std::vector<double> energy_gaps;  ///< E_k - E_0 per catalog entry
};

struct GroundStateResult {
    std::optional<IonConfiguration> best;  ///< empty when no start converged
    MinimaCatalog catalog;
};

struct CalibrationResult {
    bool ok = false;
    double omega_tr = 0.0;
    double density = 0.0;
    int n_probes = 0;
};

/// Uniform seeding at spacing 2*pi/density, symmetric about the origin.
std::vector<double> initial_guess(const ChainParams& params, double target_density);

/** A seeded multi-start candidate: the base configuration plus i.i.d. uniform
    noise of half-width `scale` on every spacing (cumulative in position,
    recentered), with spacings clamped to >= 0.1. Spacing noise explores
    distinct lattice registrations of whole chain segments, which is where
    the near-degenerate minima of the pinned phase live; per-ion position
    noise only rattles ions inside their wells and keeps finding the same
    few basins.
*/
std::vector<double> perturbed_start(std::vector<double> base, double scale, std::uint64_t seed);

/** Relax a configuration to a local energy minimum.

    Damped-Newton descent: each step solves (H + lambda*I) d = -g with the
    damping raised until the step both keeps the ions ordered and does not
    raise the energy, then lowered again on success. Near the minimum lambda
    collapses and the iteration converges quadratically, which is what makes
    the 1e-10 gradient tolerance cheap to reach. A converged result is
    certified as a minimum (smallest Hessian eigenvalue >= -1e-10); when the
    gradient vanishes at a saddle instead, the state is kicked along the
    negative-curvature direction and descent resumes.

    Exhausting the iteration budget returns converged=false with the current
    state. An optional energy_trace records the energy after every accepted
    step (used by the descent property tests).
*/
IonConfiguration relax(const ChainParams& params, std::span<const double> start,
                       const RelaxSettings& settings,
                       std::vector<double>* energy_trace = nullptr);

/** Multi-start minimum search. Start 1 is the uniform guess (microtrap
    variant: the trap centers); starts 2..n are perturbed_start variants of
    it with noise of scale perturbation_scale. Returns the best converged
    configuration plus the catalog of all distinct minima, merged in
    deterministic (energy, then lexicographic) order.
*/
GroundStateResult ground_state(const ChainParams& params, const RelaxSettings& settings,
                               double target_density);

/// Density 2*pi*(count-1)/span over the middle-third ions. Needs n >= 3.
double central_density(std::span<const double> positions);
double central_density(const IonConfiguration& config);

/** Bisect omega_tr until the relaxed chain holds the target density in its
    central third to within density_tolerance (relative). The bracket starts
    from an empirical 1/sqrt(n) anchor and expands as needed inside
    [1e-6, 1]; ok=false when no bracket exists there.
*/
CalibrationResult calibrate_trap(int n_ions, double target_density, double k,
                                 double density_tolerance = 0.005,
                                 const RelaxSettings& settings = {});

/// Mean phase advance per ion expressed as a density: 2*pi divided by the
/// least-squares slope of x_i versus i.
double rotation_number(std::span<const double> positions);

} // namespace ionchain
