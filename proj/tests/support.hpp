#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ionchain/chain_model.hpp"
#include "ionchain/rng.hpp"

namespace ionchain::test {

/// Random ordered configuration with spacings in [2, 6], centered on 0.
inline std::vector<double> random_configuration(int n, SplitMix64& rng) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double pos = 0.0;
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = pos;
        pos += rng.uniform(2.0, 6.0);
    }
    const double mid = 0.5 * (x.front() + x.back());
    for (double& xi : x)
        xi -= mid;
    return x;
}

/// Central-difference gradient of the energy, step h.
inline std::vector<double> fd_gradient(const ChainParams& params, std::span<const double> x,
                                       double h) {
    std::vector<double> g(x.size());
    std::vector<double> probe(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double ep = energy(params, probe);
        probe[i] = x[i] - h;
        const double em = energy(params, probe);
        probe[i] = x[i];
        g[i] = (ep - em) / (2.0 * h);
    }
    return g;
}

/// Central-difference Hessian from the analytic gradient, step h.
inline Eigen::MatrixXd fd_hessian(const ChainParams& params, std::span<const double> x, double h) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd hess(n, n);
    std::vector<double> probe(x.begin(), x.end());
    for (int j = 0; j < n; ++j) {
        probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + h;
        const auto gp = gradient(params, probe);
        probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - h;
        const auto gm = gradient(params, probe);
        probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i)
            hess(i, j) = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2.0 * h);
    }
    return hess;
}

/// Mirror image: negate and reverse.
inline std::vector<double> mirrored(std::span<const double> x) {
    std::vector<double> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        m[i] = -x[x.size() - 1 - i];
    return m;
}

} // namespace ionchain::test
