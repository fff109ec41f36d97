#pragma once

#include <stdexcept>

namespace ionchain {

/// Invalid argument or violated precondition.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Coincident ion positions: the Coulomb energy is singular.
struct SingularityError : DomainError {
    using DomainError::DomainError;
};

/// Equilibrium-map momentum dropped to zero or below: the generated chain
/// decompressed beyond the map's region of validity.
struct OrbitEscapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Stationary configuration with a significantly negative Hessian eigenvalue;
/// spectra are only defined at minima.
struct SaddlePointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ionchain
