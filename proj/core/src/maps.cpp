#include "ionchain/maps.hpp"

#include "ionchain/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace ionchain {

IonMapState ion_map_step(const IonMapState& s, double k, double omega_tr) {
    IonMapState next;
    next.p = s.p - omega_tr * omega_tr * s.x - k * std::sin(s.x);
    if (!(next.p > 0.0))
        throw OrbitEscapeError("ion_map_step: momentum dropped to zero, orbit escaped");
    next.x = s.x + 1.0 / std::sqrt(next.p);
    return next;
}

IonMapState ion_map_inverse(const IonMapState& s, double k, double omega_tr) {
    IonMapState prev;
    prev.x = s.x - 1.0 / std::sqrt(s.p);
    prev.p = s.p + omega_tr * omega_tr * prev.x + k * std::sin(prev.x);
    if (!(prev.p > 0.0))
        throw OrbitEscapeError("ion_map_inverse: momentum dropped to zero, orbit escaped");
    return prev;
}

StandardMapState standard_map_step(const StandardMapState& s, double k_eff) {
    StandardMapState next;
    next.y = s.y - k_eff * std::sin(s.x);
    next.x = s.x - next.y;
    return next;
}

StandardMapState standard_map_inverse(const StandardMapState& s, double k_eff) {
    StandardMapState prev;
    prev.x = s.x + s.y;
    prev.y = s.y + k_eff * std::sin(prev.x);
    return prev;
}

double standard_map_jacobian_det(const StandardMapState& s, double k_eff) {
    // d(x',y')/d(x,y) = [[1 + K cos x, -1], [-K cos x, 1]]
    const double kc = k_eff * std::cos(s.x);
    return (1.0 + kc) * 1.0 - (-1.0) * (-kc);
}

double chirikov_alpha(double nu) {
    if (!(nu > 0.0))
        throw DomainError("chirikov_alpha: density must be positive");
    const double s = 2.0 * std::numbers::pi / nu;
    return 0.5 * s * s * s;
}

double resonant_momentum(double nu) {
    if (!(nu > 0.0))
        throw DomainError("resonant_momentum: density must be positive");
    const double v = nu / (2.0 * std::numbers::pi);
    return v * v;
}

double resonant_spacing(double nu) {
    if (!(nu > 0.0))
        throw DomainError("resonant_spacing: density must be positive");
    return 2.0 * std::numbers::pi / nu;
}

double k_eff(double k, double nu) {
    return k * chirikov_alpha(nu);
}

double k_c_theory(double nu) {
    if (!(nu > 0.0))
        throw DomainError("k_c_theory: density must be positive");
    const double r = nu / golden_mean;
    return 0.034 * r * r * r;
}

std::vector<StandardMapState> standard_map_orbit(StandardMapState s, double k_eff, int n_steps) {
    if (n_steps < 0)
        throw DomainError("standard_map_orbit: negative step count");
    std::vector<StandardMapState> orbit;
    orbit.reserve(static_cast<std::size_t>(n_steps) + 1);
    orbit.push_back(s);
    for (int i = 0; i < n_steps; ++i) {
        s = standard_map_step(s, k_eff);
        orbit.push_back(s);
    }
    return orbit;
}

namespace {

/** Nearest-neighbor chain model. Stationary configurations of this
    functional are exactly the orbits of the equilibrium map: the gradient
    component at ion i is the map's force balance. When fixed_ends is set the
    two end ions are boundary conditions (only interior ions move), which
    pins the chain's winding number; a free chain under lattice forces slides
    onto nearby commensurate lockings and loses the target density.
*/
struct NearestNeighborModel {
    int n;
    double k;
    double w2;
    bool fixed_ends;

    int lo() const { return fixed_ends ? 1 : 0; }
    int hi() const { return fixed_ends ? n - 1 : n; }  // half-open

    double energy(const std::vector<double>& x) const {
        double e = 0.0;
        for (double xi : x)
            e += 0.5 * w2 * xi * xi - k * std::cos(xi);
        for (int i = 1; i < n; ++i)
            e += 1.0 / (x[i] - x[i - 1]);
        return e;
    }

    /// Gradient over the movable ions only.
    Eigen::VectorXd grad(const std::vector<double>& x) const {
        const int m = hi() - lo();
        Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
        for (int i = lo(); i < hi(); ++i) {
            double gi = w2 * x[static_cast<std::size_t>(i)] + k * std::sin(x[static_cast<std::size_t>(i)]);
            if (i > 0) {
                const double d = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - 1)];
                gi -= 1.0 / (d * d);
            }
            if (i + 1 < n) {
                const double d = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
                gi += 1.0 / (d * d);
            }
            g[i - lo()] = gi;
        }
        return g;
    }

    Eigen::MatrixXd hess(const std::vector<double>& x) const {
        const int m = hi() - lo();
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
        for (int i = lo(); i < hi(); ++i) {
            double d2 = w2 + k * std::cos(x[static_cast<std::size_t>(i)]);
            if (i > 0) {
                const double d = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - 1)];
                d2 += 2.0 / (d * d * d);
            }
            if (i + 1 < n) {
                const double d = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
                d2 += 2.0 / (d * d * d);
            }
            h(i - lo(), i - lo()) = d2;
        }
        for (int i = std::max(lo(), 1); i < hi(); ++i) {
            if (i - 1 < lo())
                continue;
            const double d = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - 1)];
            const double c = 2.0 / (d * d * d);
            h(i - lo(), i - 1 - lo()) = -c;
            h(i - 1 - lo(), i - lo()) = -c;
        }
        return h;
    }
};

bool increasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            return false;
    return true;
}

/// Damped-Newton minimization of the nearest-neighbor model, same scheme as
/// the full-model relaxer.
bool nn_relax(const NearestNeighborModel& m, std::vector<double>& x) {
    const int nm = m.hi() - m.lo();
    auto apply = [&](const std::vector<double>& from, const Eigen::VectorXd& delta,
                     std::vector<double>& to) {
        to = from;
        for (int i = 0; i < nm; ++i)
            to[static_cast<std::size_t>(i + m.lo())] += delta[i];
    };

    double e = m.energy(x);
    Eigen::VectorXd g = m.grad(x);
    double gnorm = g.lpNorm<Eigen::Infinity>();

    double step = 0.05;
    int it = 0;
    std::vector<double> cand;
    while (gnorm > 1e-2 && it < 20000 && step > 1e-15) {
        apply(x, (-step / gnorm) * g, cand);
        ++it;
        if (increasing(cand)) {
            const double ec = m.energy(cand);
            if (ec < e) {
                x = cand;
                e = ec;
                g = m.grad(x);
                gnorm = g.lpNorm<Eigen::Infinity>();
                step = std::min(step * 1.2, 0.5);
                continue;
            }
        }
        step *= 0.5;
    }

    double lambda = 1e-3;
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(nm, nm);
    while (gnorm > 1e-11 && it < 50000) {
        const Eigen::MatrixXd h = m.hess(x);
        bool accepted = false;
        double ec = 0.0;
        for (int tries = 0; tries < 64; ++tries) {
            Eigen::LLT<Eigen::MatrixXd> llt(h + lambda * identity);
            if (llt.info() != Eigen::Success) {
                lambda *= 10.0;
                continue;
            }
            apply(x, llt.solve(-g), cand);
            if (!increasing(cand)) {
                lambda *= 10.0;
                continue;
            }
            ec = m.energy(cand);
            if (ec <= e + 1e-14 * (1.0 + std::abs(e))) {
                accepted = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14)
                break;
        }
        ++it;
        if (!accepted)
            break;
        x = cand;
        e = ec;
        g = m.grad(x);
        gnorm = g.lpNorm<Eigen::Infinity>();
        lambda = std::max(lambda * 0.25, 1e-14);
    }
    return gnorm <= 1e-11;
}

} // namespace

MapChainResult ion_map_chain(int n_ions, double k, double omega_tr,
                             const MapChainOptions& options) {
    if (n_ions < 3)
        throw DomainError("ion_map_chain: need at least three ions");
    if (!(k >= 0.0) || !(omega_tr >= 0.0))
        throw DomainError("ion_map_chain: amplitudes must be non-negative");
    if (options.phase_samples < 1)
        throw DomainError("ion_map_chain: need at least one phase sample");
    const double spacing = resonant_spacing(options.target_density);
    // Free ends under a trap; fixed ends otherwise, to hold the winding.
    const NearestNeighborModel model{n_ions, k, omega_tr * omega_tr, omega_tr == 0.0};

    MapChainResult best;
    best.energy = std::numeric_limits<double>::infinity();
    for (int j = 0; j < options.phase_samples; ++j) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(options.phase_samples);
        std::vector<double> x(static_cast<std::size_t>(n_ions));
        for (int i = 0; i < n_ions; ++i)
            x[static_cast<std::size_t>(i)] = (static_cast<double>(i) - 0.5 * (n_ions - 1)) * spacing + phi;
        if (!nn_relax(model, x))
            continue;
        const double e = model.energy(x);
        if (e < best.energy) {
            best.energy = e;
            best.seed_phase = phi;
            best.positions = std::move(x);
        }
    }
    if (best.positions.empty())
        throw OrbitEscapeError("ion_map_chain: no seed phase produced a stable chain");
    return best;
}

std::vector<double> ion_map_segment(std::span<const double> segment, double k) {
    if (segment.size() < 3)
        throw DomainError("ion_map_segment: need at least three ions");
    if (!(k >= 0.0))
        throw DomainError("ion_map_segment: amplitude must be non-negative");
    for (std::size_t i = 1; i < segment.size(); ++i)
        if (!(segment[i] > segment[i - 1]))
            throw DomainError("ion_map_segment: positions must be strictly increasing");
    const NearestNeighborModel model{static_cast<int>(segment.size()), k, 0.0, true};
    std::vector<double> x(segment.begin(), segment.end());
    if (!nn_relax(model, x))
        throw OrbitEscapeError("ion_map_segment: interior relaxation did not converge");
    return x;
}

} // namespace ionchain
