#include "ionchain/ground_state.hpp"

#include "ionchain/errors.hpp"
#include "ionchain/numerics.hpp"
#include "ionchain/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

namespace ionchain {

namespace {

constexpr double kMinimumEigTolerance = -1e-10;
constexpr double kDistinctTolerance = 1e-4;
constexpr double kMinStartSpacing = 0.1;

bool strictly_increasing(const Eigen::VectorXd& x) {
    for (Eigen::Index i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            return false;
    return true;
}

std::span<const double> as_span(const Eigen::VectorXd& x) {
    return {x.data(), static_cast<std::size_t>(x.size())};
}

double smallest_eigenvalue(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

} // namespace

std::vector<double> initial_guess(const ChainParams& params, double target_density) {
    params.validate();
    if (!(target_density > 0.0))
        throw DomainError("initial_guess: target density must be positive");
    const int n = params.n_ions;
    const double spacing = 2.0 * std::numbers::pi / target_density;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = (static_cast<double>(i) - 0.5 * (n - 1)) * spacing;
    return x;
}

std::vector<double> perturbed_start(std::vector<double> base, double scale, std::uint64_t seed) {
    SplitMix64 rng(seed);
    double drift = 0.0;
    CompensatedSum mean;
    std::vector<double> shift(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        drift += rng.uniform(-scale, scale);
        shift[i] = drift;
        mean.add(drift);
    }
    const double center = mean.value() / static_cast<double>(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        base[i] += shift[i] - center;
    std::sort(base.begin(), base.end());
    for (std::size_t i = 1; i < base.size(); ++i)
        base[i] = std::max(base[i], base[i - 1] + kMinStartSpacing);
    return base;
}

IonConfiguration relax(const ChainParams& params, std::span<const double> start,
                       const RelaxSettings& settings, std::vector<double>* energy_trace) {
    params.validate();
    if (!(settings.grad_tolerance > 0.0))
        throw DomainError("relax: gradient tolerance must be positive");
    if (static_cast<int>(start.size()) != params.n_ions)
        throw DomainError("relax: start size does not match n_ions");
    check_ordered(start);

    const int n = params.n_ions;
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.data(), n);

    auto eval_energy = [&](const Eigen::VectorXd& v) { return energy(params, as_span(v)); };
    auto eval_gradient = [&](const Eigen::VectorXd& v) {
        const auto g = gradient(params, as_span(v));
        return Eigen::Map<const Eigen::VectorXd>(g.data(), n).eval();
    };

    double e = eval_energy(x);
    Eigen::VectorXd g = eval_gradient(x);
    double gnorm = g.lpNorm<Eigen::Infinity>();
    if (energy_trace) {
        energy_trace->clear();
        energy_trace->push_back(e);
    }

    int iterations = 0;

    // Phase 1: plain gradient descent with an adaptive step. Newton steps
    // from a rough start can tunnel between basins; following the downhill
    // flow first keeps each start attached to its own basin, which is what
    // multi-start minima enumeration relies on.
    {
        const double exit_gnorm = std::max(1e-2, 10.0 * settings.grad_tolerance);
        double step = 0.05;  // maximum per-ion displacement of a trial step
        const int phase_budget = std::min(settings.max_iterations, 20000);
        while (gnorm > exit_gnorm && iterations < phase_budget && step > 1e-15) {
            const double t = step / gnorm;
            Eigen::VectorXd cand = x - t * g;
            ++iterations;
            if (strictly_increasing(cand)) {
                const double ec = eval_energy(cand);
                if (ec < e) {
                    x = std::move(cand);
                    e = ec;
                    g = eval_gradient(x);
                    gnorm = g.lpNorm<Eigen::Infinity>();
                    step = std::min(step * 1.2, 0.5);
                    if (energy_trace)
                        energy_trace->push_back(e);
                    continue;
                }
            }
            step *= 0.5;
        }
    }

    double lambda = 1e-3;
    int saddle_escapes = 0;
    bool converged = false;
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);

    while (iterations < settings.max_iterations) {
        if (gnorm <= settings.grad_tolerance) {
            const double lam_min = smallest_eigenvalue(hessian(params, as_span(x)));
            if (lam_min >= kMinimumEigTolerance) {
                converged = true;
                break;
            }
            // Stationary but not a minimum: push along the soft direction.
            if (saddle_escapes++ >= 30)
                break;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian(params, as_span(x)));
            const Eigen::VectorXd dir = solver.eigenvectors().col(0);
            double min_gap = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 1; i < x.size(); ++i)
                min_gap = std::min(min_gap, x[i] - x[i - 1]);
            double scale = std::min(0.1 * min_gap, 0.5) / std::max(dir.lpNorm<Eigen::Infinity>(), 1e-300);
            bool kicked = false;
            for (int attempt = 0; attempt < 8 && !kicked; ++attempt, scale *= 0.25) {
                for (const double sign : {+1.0, -1.0}) {
                    Eigen::VectorXd cand = x + sign * scale * dir;
                    if (!strictly_increasing(cand))
                        continue;
                    const double ec = eval_energy(cand);
                    if (ec <= e) {
                        x = std::move(cand);
                        e = ec;
                        kicked = true;
                        break;
                    }
                }
            }
            if (!kicked)
                break;
            g = eval_gradient(x);
            gnorm = g.lpNorm<Eigen::Infinity>();
            lambda = std::max(lambda, 1e-3);
            continue;
        }

        const Eigen::MatrixXd h = hessian(params, as_span(x));
        bool accepted = false;
        Eigen::VectorXd x_new;
        double e_new = 0.0;
        const double slack = 1e-14 * (1.0 + std::abs(e));
        for (int tries = 0; tries < 64; ++tries) {
            Eigen::LLT<Eigen::MatrixXd> llt(h + lambda * identity);
            if (llt.info() != Eigen::Success) {
                lambda *= 10.0;
                continue;
            }
            x_new = x + llt.solve(-g);
            if (!strictly_increasing(x_new)) {
                lambda *= 10.0;
                continue;
            }
            e_new = eval_energy(x_new);
            if (e_new <= e + slack) {
                accepted = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14)
                break;
        }
        ++iterations;
        if (!accepted)
            break;  // cannot make further descent progress
        x = std::move(x_new);
        e = e_new;
        g = eval_gradient(x);
        gnorm = g.lpNorm<Eigen::Infinity>();
        lambda = std::max(lambda * 0.25, 1e-14);
        if (energy_trace)
            energy_trace->push_back(e);
    }

    IonConfiguration result;
    result.positions.assign(x.data(), x.data() + n);
    result.energy = e;
    result.grad_inf_norm = gnorm;
    result.converged = converged;
    result.n_iterations = iterations;
    return result;
}

namespace {

bool distinct_configurations(const IonConfiguration& a, const IonConfiguration& b) {
    if (a.positions.size() != b.positions.size())
        return true;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.positions.size(); ++i)
        max_diff = std::max(max_diff, std::abs(a.positions[i] - b.positions[i]));
    return max_diff > kDistinctTolerance;
}

bool lexicographic_less(const IonConfiguration& a, const IonConfiguration& b) {
    if (a.energy != b.energy)
        return a.energy < b.energy;
    return std::lexicographical_compare(a.positions.begin(), a.positions.end(),
                                        b.positions.begin(), b.positions.end());
}

} // namespace

GroundStateResult ground_state(const ChainParams& params, const RelaxSettings& settings,
                               double target_density) {
    params.validate();
    if (settings.n_starts < 1)
        throw DomainError("ground_state: n_starts must be >= 1");

    std::vector<double> base;
    if (params.variant == PotentialVariant::DisorderedMicrotraps)
        base = trap_centers(params.disorder, params.n_ions);
    else
        base = initial_guess(params, target_density);

    std::vector<IonConfiguration> converged;
    for (int s = 0; s < settings.n_starts; ++s) {
        const std::vector<double> start =
            s == 0 ? base
                   : perturbed_start(base, settings.perturbation_scale,
                                     derive_seed(settings.seed, static_cast<std::uint64_t>(s)));
        IonConfiguration config = relax(params, start, settings);
        if (config.converged)
            converged.push_back(std::move(config));
    }

    std::sort(converged.begin(), converged.end(), lexicographic_less);

    GroundStateResult result;
    for (auto& config : converged) {
        const bool is_new = std::all_of(
            result.catalog.configurations.begin(), result.catalog.configurations.end(),
            [&](const IonConfiguration& kept) { return distinct_configurations(kept, config); });
        if (is_new)
            result.catalog.configurations.push_back(std::move(config));
    }
    result.catalog.n_distinct = static_cast<int>(result.catalog.configurations.size());
    if (!result.catalog.configurations.empty()) {
        const double e0 = result.catalog.configurations.front().energy;
        for (const auto& config : result.catalog.configurations)
            result.catalog.energy_gaps.push_back(config.energy - e0);
        result.best = result.catalog.configurations.front();
    }
    return result;
}

double central_density(std::span<const double> positions) {
    const int n = static_cast<int>(positions.size());
    if (n < 3)
        throw DomainError("central_density: need at least three ions");
    int lo = n / 3;
    int hi = (2 * n) / 3;          // half-open [lo, hi)
    if (hi - lo < 2)
        hi = lo + 2;               // guard for tiny n so the span is nonzero
    const double span = positions[static_cast<std::size_t>(hi - 1)] - positions[static_cast<std::size_t>(lo)];
    if (!(span > 0.0))
        throw DomainError("central_density: degenerate central span");
    return 2.0 * std::numbers::pi * static_cast<double>(hi - 1 - lo) / span;
}

double central_density(const IonConfiguration& config) {
    return central_density(std::span<const double>(config.positions));
}

namespace {

/// Relaxed central density at a probe frequency. Every probe starts cold
/// from the uniform guess: warm-starting across probes drags hysteresis
/// between near-degenerate minima into the bisection and breaks its
/// monotonicity assumption.
double probe_density(int n_ions, double k, double omega, double target,
                     const RelaxSettings& settings) {
    const ChainParams params = ChainParams::periodic(n_ions, omega, k);
    const IonConfiguration config = relax(params, initial_guess(params, target), settings);
    if (!config.converged)
        throw DomainError("calibrate_trap: relaxation failed at probe frequency");
    return central_density(config);
}

} // namespace

CalibrationResult calibrate_trap(int n_ions, double target_density, double k,
                                 double density_tolerance, const RelaxSettings& settings) {
    if (n_ions < 3)
        throw DomainError("calibrate_trap: need at least three ions");
    if (!(target_density > 0.0))
        throw DomainError("calibrate_trap: target density must be positive");
    if (!(density_tolerance > 0.0))
        throw DomainError("calibrate_trap: density tolerance must be positive");

    constexpr double omega_min = 1e-6;
    constexpr double omega_max = 1.0;
    CalibrationResult result;

    RelaxSettings probe_settings = settings;
    probe_settings.n_starts = 1;

    // Empirical anchor: a 50-ion chain at golden-mean density sits near
    // omega_tr = 0.014; density scales roughly like omega^(2/3) and the
    // confining frequency like 1/sqrt(n).
    double est = 0.014 * std::sqrt(50.0 / n_ions) * std::pow(target_density / 1.618, 1.5);
    est = std::clamp(est, omega_min, omega_max);

    auto density_at = [&](double omega) {
        ++result.n_probes;
        return probe_density(n_ions, k, omega, target_density, probe_settings);
    };

    double lo = std::max(est / 4.0, omega_min);
    double hi = std::min(est * 4.0, omega_max);
    double f_lo = density_at(lo) - target_density;
    while (f_lo > 0.0 && lo > omega_min) {
        lo = std::max(lo / 4.0, omega_min);
        f_lo = density_at(lo) - target_density;
    }
    double f_hi = density_at(hi) - target_density;
    while (f_hi < 0.0 && hi < omega_max) {
        hi = std::min(hi * 4.0, omega_max);
        f_hi = density_at(hi) - target_density;
    }
    if (f_lo > 0.0 || f_hi < 0.0)
        return result;  // no bracket inside [1e-6, 1]

    // Geometric bisection; density increases monotonically with omega.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = std::sqrt(lo * hi);
        const double density = density_at(mid);
        if (std::abs(density - target_density) <= density_tolerance * target_density) {
            result.ok = true;
            result.omega_tr = mid;
            result.density = density;
            return result;
        }
        if (density < target_density)
            lo = mid;
        else
            hi = mid;
        if (hi / lo < 1.0 + 1e-12)
            break;
    }
    return result;
}

double rotation_number(std::span<const double> positions) {
    if (positions.size() < 2)
        throw DomainError("rotation_number: need at least two ions");
    std::vector<double> idx(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        idx[i] = static_cast<double>(i);
    const LineFit fit = fit_line(idx, positions);
    if (!(fit.slope > 0.0))
        throw DomainError("rotation_number: degenerate fit");
    return 2.0 * std::numbers::pi / fit.slope;
}

} // namespace ionchain
