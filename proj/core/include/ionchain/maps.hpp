#pragma once

#include <vector>

#include "ionchain/chain_model.hpp"

namespace ionchain {

/** State of the recursive equilibrium map. x is the position of ion i and
    p = 1/(x_i - x_{i-1})^2 the effective momentum conjugate to it, so p > 0
    throughout the map's region of validity.
*/
struct IonMapState {
    double x = 0.0;
    double p = 0.0;
};

/// Phase-space point of the standard map.
struct StandardMapState {
    double x = 0.0;
    double y = 0.0;
};

/** One step of the equilibrium map:

        p' = p - omega_tr^2 x - K sin x,   x' = x + 1/sqrt(p')

    Any generated sequence satisfies the nearest-neighbor force balance of the
    chain by construction. Throws OrbitEscapeError when p' <= 0 (the chain
    decompresses beyond the map's validity).
*/
IonMapState ion_map_step(const IonMapState& s, double k, double omega_tr);

/// Exact inverse of ion_map_step.
IonMapState ion_map_inverse(const IonMapState& s, double k, double omega_tr);

/** One step of the standard map (kicked-rotator form):

        y' = y - k_eff sin x,   x' = x - y'

    Area-preserving with unit Jacobian determinant everywhere.
*/
StandardMapState standard_map_step(const StandardMapState& s, double k_eff);

/// Exact inverse of standard_map_step: x = x' + y', y = y' + k_eff sin x.
StandardMapState standard_map_inverse(const StandardMapState& s, double k_eff);

/// Analytic Jacobian determinant of one standard-map step at the given point.
double standard_map_jacobian_det(const StandardMapState& s, double k_eff);

/// Linearization coefficient alpha = (2*pi/nu)^3 / 2 = 1/(2 p_r^(3/2)).
double chirikov_alpha(double nu);

/// Resonant effective momentum p_r = (nu/2*pi)^2.
double resonant_momentum(double nu);

/// Resonant nearest-neighbor spacing 2*pi/nu (kept separate from the
/// momentum value to avoid conflating the two conventions).
double resonant_spacing(double nu);

/// Effective chaos parameter K_eff = K * (2*pi/nu)^3 / 2.
double k_eff(double k, double nu);

/// Theoretical pinning threshold K_c(nu) = 0.034 * (nu/nu_g)^3.
double k_c_theory(double nu);

/// Iterate the standard map, recording every state including the initial one.
std::vector<StandardMapState> standard_map_orbit(StandardMapState s, double k_eff, int n_steps);

struct MapChainOptions {
    double target_density = golden_mean;
    int phase_samples = 64;  ///< seed phases scanned across one lattice period
};

struct MapChainResult {
    std::vector<double> positions;
    double seed_phase = 0.0;  ///< seed phase of the selected chain
    double energy = 0.0;      ///< nearest-neighbor model energy used for selection
};

/** Generate an n-ion chain whose positions form an orbit of the equilibrium
    map, i.e. satisfy the nearest-neighbor force balance.

    Orbits of the map are exactly the stationary configurations of the
    nearest-neighbor chain model, so the chain is found by minimizing that
    functional instead of iterating the map forward: in the chaotic (pinned)
    regime forward iteration loses the physical branch within a few steps,
    while the variational route lands on the minimal-energy orbit directly.
    Uniform chains at target_density, offset by phase_samples seed phases
    across one lattice period, are relaxed under the nearest-neighbor model
    and the lowest-energy survivor is returned.

    With omega_tr = 0 the end ions are held fixed at the target-density span,
    which pins the winding number (a free chain slides onto nearby
    commensurate lockings); interior ions satisfy the map's force balance
    exactly. Passing omega_tr = 0 is the right choice for comparing bulk
    structure against a trapped chain: inside the nearest-neighbor truncation
    the trap bends the density profile parabolically away from the center,
    which the full Coulomb chain does not do. Throws OrbitEscapeError when no
    seed phase yields a stable chain.
*/
MapChainResult ion_map_chain(int n_ions, double k, double omega_tr,
                             const MapChainOptions& options = {});

/** Solve the equilibrium map as a boundary-value problem on a chain segment:
    the end positions stay fixed and the interior relaxes to the
    nearest-neighbor force balance, starting from the given positions. This
    is how a map-generated chain is compared against a fully relaxed one:
    the fixed ends carry the integrated trap/bulk pressure, so the segment
    model itself uses no trap term. Returns the reconstructed segment.
*/
std::vector<double> ion_map_segment(std::span<const double> segment, double k);

} // namespace ionchain
