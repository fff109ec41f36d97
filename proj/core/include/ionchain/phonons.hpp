#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ionchain/chain_model.hpp"
#include "ionchain/ground_state.hpp"

namespace ionchain {

/** Linearized oscillation spectrum about an equilibrium configuration.
    frequencies[k] = sqrt(max(lambda_k, 0)) with lambda_k the ascending
    Hessian eigenvalues; column k of modes is the matching orthonormal
    eigenvector. k_scaled holds the mode index i/N used as a wavevector
    coordinate for acoustic fits and plots.
*/
struct PhononSpectrum {
    std::vector<double> frequencies;
    Eigen::MatrixXd modes;
    std::vector<double> k_scaled;
    std::vector<double> participation_ratios;
};

struct AcousticFit {
    double sound_velocity = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

struct ModeLocalization {
    double omega = 0.0;
    double participation_ratio = 0.0;
    double centroid = 0.0;
    double spread = 0.0;
};

/** Eigendecompose the Hessian at a converged minimum. Eigenvalues inside
    [-1e-10, 0) are treated as rounding noise and clipped to zero; anything
    below -1e-10 raises SaddlePointError. A non-converged configuration is a
    DomainError.
*/
PhononSpectrum spectrum(const ChainParams& params, const IonConfiguration& config);

/// Relax to the ground state and return the smallest phonon frequency.
double gap(const ChainParams& params, const RelaxSettings& settings,
           double target_density = golden_mean);

/// Least-squares line omega(k) over the acoustic part of the spectrum
/// (k_scaled < 0.25). Needs at least 10 modes.
AcousticFit fit_acoustic(const PhononSpectrum& spec);

/// Inverse participation ratio 1/sum(e_i^4) of a unit-norm mode: 1 for a
/// single-site mode, N for a uniform one.
double participation_ratio(std::span<const double> mode);

/// Per-mode localization diagnostics: centroid sum(i e_i^2) and rms spread.
std::vector<ModeLocalization> localization_report(const PhononSpectrum& spec);

} // namespace ionchain
