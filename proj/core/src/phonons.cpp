#include "ionchain/phonons.hpp"

#include "ionchain/errors.hpp"
#include "ionchain/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstddef>

namespace ionchain {

namespace {
constexpr double kEigNoiseFloor = -1e-10;
}

PhononSpectrum spectrum(const ChainParams& params, const IonConfiguration& config) {
    if (!config.converged)
        throw DomainError("spectrum: configuration is not converged");
    if (static_cast<int>(config.positions.size()) != params.n_ions)
        throw DomainError("spectrum: configuration size does not match n_ions");

    const Eigen::MatrixXd h = hessian(params, config.positions);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigendecomposition failed");

    const int n = params.n_ions;
    PhononSpectrum spec;
    spec.modes = solver.eigenvectors();
    spec.frequencies.resize(static_cast<std::size_t>(n));
    spec.k_scaled.resize(static_cast<std::size_t>(n));
    spec.participation_ratios.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double lambda = solver.eigenvalues()(i);
        if (lambda < kEigNoiseFloor)
            throw SaddlePointError("spectrum: configuration is a saddle point");
        if (lambda < 0.0)
            lambda = 0.0;
        spec.frequencies[static_cast<std::size_t>(i)] = std::sqrt(lambda);
        spec.k_scaled[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(n);
        const auto col = spec.modes.col(i);
        spec.participation_ratios[static_cast<std::size_t>(i)] =
            participation_ratio(std::span<const double>(col.data(), static_cast<std::size_t>(n)));
    }
    return spec;
}

double gap(const ChainParams& params, const RelaxSettings& settings, double target_density) {
    const GroundStateResult result = ground_state(params, settings, target_density);
    if (!result.best)
        throw std::runtime_error("gap: no start converged");
    const PhononSpectrum spec = spectrum(params, *result.best);
    return spec.frequencies.front();
}

AcousticFit fit_acoustic(const PhononSpectrum& spec) {
    if (spec.frequencies.size() < 10)
        throw DomainError("fit_acoustic: need at least 10 modes");
    // The acoustic form omega = C_v*k + omega_tr holds in the lower quarter
    // of the band; past k ~ 0.25 the sliding-phase spectrum develops a
    // shoulder that drags a wider fit well below the actual sound velocity.
    std::vector<double> k, w;
    for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
        if (spec.k_scaled[i] < 0.25) {
            k.push_back(spec.k_scaled[i]);
            w.push_back(spec.frequencies[i]);
        }
    }
    const LineFit fit = fit_line(k, w);
    return AcousticFit{fit.slope, fit.intercept, fit.residual_rms};
}

double participation_ratio(std::span<const double> mode) {
    CompensatedSum norm2, quartic;
    for (double e : mode) {
        norm2.add(e * e);
        quartic.add(e * e * e * e);
    }
    if (std::abs(std::sqrt(norm2.value()) - 1.0) > 1e-8)
        throw DomainError("participation_ratio: mode is not normalized");
    return 1.0 / quartic.value();
}

std::vector<ModeLocalization> localization_report(const PhononSpectrum& spec) {
    const std::size_t n = spec.frequencies.size();
    std::vector<ModeLocalization> report(n);
    for (std::size_t k = 0; k < n; ++k) {
        CompensatedSum first, second;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = spec.modes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            const double weight = w * w;
            first.add(static_cast<double>(i) * weight);
            second.add(static_cast<double>(i) * static_cast<double>(i) * weight);
        }
        ModeLocalization& m = report[k];
        m.omega = spec.frequencies[k];
        m.participation_ratio = spec.participation_ratios[k];
        m.centroid = first.value();
        m.spread = std::sqrt(std::max(second.value() - m.centroid * m.centroid, 0.0));
    }
    return report;
}

} // namespace ionchain
