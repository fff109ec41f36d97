#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ionchain {

/// Golden-mean ion density (1 + sqrt 5)/2, the most robust irrational filling.
inline constexpr double golden_mean = 1.618033988749894848;

enum class PotentialVariant {
    PeriodicUniform,      ///< global harmonic trap + periodic lattice
    DisorderedMicrotraps  ///< one local harmonic microtrap per ion, random spacings
};

/** Geometry of a disordered microtrap array. Trap centers are laid out as
    c_0 = 0, c_{i+1} = c_i + s_i with the spacings s_i drawn uniformly from
    [mean*(1-w), mean*(1+w)] using the seeded SplitMix64 stream, so a given
    (params, n) pair always produces the same array.
*/
struct DisorderParams {
    double mean_spacing = 6.283185307179586;  ///< average trap spacing (one lattice period)
    double relative_halfwidth = 0.25;         ///< w in [0, 1)
    double trap_stiffness = 0.2;              ///< curvature kappa of each microtrap
    std::uint64_t seed = 0;
};

/** Parameters of the 1D Coulomb chain.

    PeriodicUniform potential energy (kinetic terms are zero in statics):

        E(x) = sum_i [ omega_tr^2 x_i^2 / 2 - K cos x_i ] + sum_{i>j} 1/(x_i - x_j)

    DisorderedMicrotraps replaces the on-site part with kappa*(x_i - c_i)^2/2.
*/
struct ChainParams {
    int n_ions = 1;
    double omega_tr = 0.0;         ///< global trap frequency (PeriodicUniform only)
    double lattice_amplitude = 0.0;///< K >= 0
    PotentialVariant variant = PotentialVariant::PeriodicUniform;
    DisorderParams disorder{};     ///< used when variant == DisorderedMicrotraps

    static ChainParams periodic(int n, double omega_tr, double k);
    static ChainParams microtraps(int n, const DisorderParams& d);

    /// Throws DomainError on invalid combinations (n < 1, K < 0, missing
    /// confinement for the periodic variant, out-of-range disorder fields).
    void validate() const;
};

/// One static chain configuration together with relaxation metadata.
struct IonConfiguration {
    std::vector<double> positions;   ///< strictly increasing
    double energy = 0.0;
    double grad_inf_norm = 0.0;
    bool converged = false;
    int n_iterations = 0;
};

/// Microtrap centers for the seeded spacing distribution; deterministic in
/// (params, n).
std::vector<double> trap_centers(const DisorderParams& params, int n);

/// Throws DomainError if positions are not strictly increasing, or
/// SingularityError if two ions coincide.
void check_ordered(std::span<const double> positions);

/// Potential energy of a configuration. Summation order is fixed (on-site
/// terms by ascending i, then pair terms by ascending j inside ascending i)
/// and compensated, so results are reproducible bit-for-bit.
double energy(const ChainParams& params, std::span<const double> positions);

/// Analytic gradient dE/dx_i.
std::vector<double> gradient(const ChainParams& params, std::span<const double> positions);

/// Analytic Hessian d2E/dx_i dx_j; exactly symmetric by construction.
Eigen::MatrixXd hessian(const ChainParams& params, std::span<const double> positions);

} // namespace ionchain
