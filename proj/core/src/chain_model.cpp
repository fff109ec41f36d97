#include "ionchain/chain_model.hpp"

#include "ionchain/errors.hpp"
#include "ionchain/numerics.hpp"
#include "ionchain/rng.hpp"

#include <cmath>
#include <cstddef>

namespace ionchain {

ChainParams ChainParams::periodic(int n, double omega_tr, double k) {
    ChainParams p;
    p.n_ions = n;
    p.omega_tr = omega_tr;
    p.lattice_amplitude = k;
    p.variant = PotentialVariant::PeriodicUniform;
    p.validate();
    return p;
}

ChainParams ChainParams::microtraps(int n, const DisorderParams& d) {
    ChainParams p;
    p.n_ions = n;
    p.variant = PotentialVariant::DisorderedMicrotraps;
    p.disorder = d;
    p.validate();
    return p;
}

void ChainParams::validate() const {
    if (n_ions < 1)
        throw DomainError("ChainParams: n_ions must be >= 1");
    if (!(lattice_amplitude >= 0.0))
        throw DomainError("ChainParams: lattice amplitude K must be >= 0");
    if (variant == PotentialVariant::PeriodicUniform) {
        // omega_tr = 0 is allowed: free chains are evaluable (translation
        // tests, bulk structure); without confinement a relaxation may
        // simply never converge.
        if (!(omega_tr >= 0.0))
            throw DomainError("ChainParams: omega_tr must be >= 0");
    } else {
        if (!(disorder.mean_spacing > 0.0))
            throw DomainError("DisorderParams: mean spacing must be positive");
        if (!(disorder.relative_halfwidth >= 0.0 && disorder.relative_halfwidth < 1.0))
            throw DomainError("DisorderParams: relative halfwidth must lie in [0, 1)");
        if (!(disorder.trap_stiffness > 0.0))
            throw DomainError("DisorderParams: trap stiffness must be positive");
    }
}

std::vector<double> trap_centers(const DisorderParams& params, int n) {
    if (n < 1)
        throw DomainError("trap_centers: n must be >= 1");
    const double lo = params.mean_spacing * (1.0 - params.relative_halfwidth);
    const double hi = params.mean_spacing * (1.0 + params.relative_halfwidth);
    SplitMix64 rng(params.seed);
    std::vector<double> centers(static_cast<std::size_t>(n));
    centers[0] = 0.0;
    for (int i = 1; i < n; ++i)
        centers[static_cast<std::size_t>(i)] =
            centers[static_cast<std::size_t>(i - 1)] + rng.uniform(lo, hi);
    return centers;
}

void check_ordered(std::span<const double> positions) {
    for (std::size_t i = 1; i < positions.size(); ++i) {
        if (positions[i] == positions[i - 1])
            throw SingularityError("coincident ion positions");
        if (positions[i] < positions[i - 1])
            throw DomainError("ion positions must be strictly increasing");
    }
}

namespace {

void check_input(const ChainParams& params, std::span<const double> positions) {
    params.validate();
    if (static_cast<int>(positions.size()) != params.n_ions)
        throw DomainError("position count does not match n_ions");
    check_ordered(positions);
}

} // namespace

double energy(const ChainParams& params, std::span<const double> positions) {
    check_input(params, positions);
    const int n = params.n_ions;
    CompensatedSum total;
    if (params.variant == PotentialVariant::PeriodicUniform) {
        const double w2 = params.omega_tr * params.omega_tr;
        const double k = params.lattice_amplitude;
        for (int i = 0; i < n; ++i) {
            const double x = positions[static_cast<std::size_t>(i)];
            total.add(0.5 * w2 * x * x - k * std::cos(x));
        }
    } else {
        const auto centers = trap_centers(params.disorder, n);
        const double kappa = params.disorder.trap_stiffness;
        for (int i = 0; i < n; ++i) {
            const double d = positions[static_cast<std::size_t>(i)] - centers[static_cast<std::size_t>(i)];
            total.add(0.5 * kappa * d * d);
        }
    }
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j)
            total.add(1.0 / (positions[static_cast<std::size_t>(i)] - positions[static_cast<std::size_t>(j)]));
    return total.value();
}

std::vector<double> gradient(const ChainParams& params, std::span<const double> positions) {
    check_input(params, positions);
    const int n = params.n_ions;
    std::vector<CompensatedSum> g(static_cast<std::size_t>(n));
    if (params.variant == PotentialVariant::PeriodicUniform) {
        const double w2 = params.omega_tr * params.omega_tr;
        const double k = params.lattice_amplitude;
        for (int i = 0; i < n; ++i) {
            const double x = positions[static_cast<std::size_t>(i)];
            g[static_cast<std::size_t>(i)].add(w2 * x + k * std::sin(x));
        }
    } else {
        const auto centers = trap_centers(params.disorder, n);
        const double kappa = params.disorder.trap_stiffness;
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)].add(
                kappa * (positions[static_cast<std::size_t>(i)] - centers[static_cast<std::size_t>(i)]));
    }
    // Pairwise forces are added antisymmetrically so they cancel exactly in
    // the total momentum balance.
    for (int i = 1; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            const double d = positions[static_cast<std::size_t>(i)] - positions[static_cast<std::size_t>(j)];
            const double f = 1.0 / (d * d);
            g[static_cast<std::size_t>(i)].add(-f);
            g[static_cast<std::size_t>(j)].add(f);
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)].value();
    return out;
}

Eigen::MatrixXd hessian(const ChainParams& params, std::span<const double> positions) {
    check_input(params, positions);
    const int n = params.n_ions;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    std::vector<CompensatedSum> diag(static_cast<std::size_t>(n));
    if (params.variant == PotentialVariant::PeriodicUniform) {
        const double w2 = params.omega_tr * params.omega_tr;
        const double k = params.lattice_amplitude;
        for (int i = 0; i < n; ++i)
            diag[static_cast<std::size_t>(i)].add(w2 + k * std::cos(positions[static_cast<std::size_t>(i)]));
    } else {
        for (int i = 0; i < n; ++i)
            diag[static_cast<std::size_t>(i)].add(params.disorder.trap_stiffness);
    }
    for (int i = 1; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            const double d = positions[static_cast<std::size_t>(i)] - positions[static_cast<std::size_t>(j)];
            const double c = 2.0 / (d * d * d);
            h(i, j) = -c;
            h(j, i) = -c;
            diag[static_cast<std::size_t>(i)].add(c);
            diag[static_cast<std::size_t>(j)].add(c);
        }
    }
    for (int i = 0; i < n; ++i)
        h(i, i) = diag[static_cast<std::size_t>(i)].value();
    return h;
}

} // namespace ionchain
