#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <span>

#include "ionchain/errors.hpp"
#include "ionchain/ground_state.hpp"
#include "ionchain/numerics.hpp"
#include "support.hpp"

using namespace ionchain;

TEST_CASE("uniform initial guess") {
    const ChainParams p3 = ChainParams::periodic(3, 0.01, 0.0);
    const auto a = initial_guess(p3, 1.0);
    CHECK(a[0] == doctest::Approx(-2.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(a[2] == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));

    const ChainParams p2 = ChainParams::periodic(2, 0.01, 0.0);
    const auto b = initial_guess(p2, 2.0);
    CHECK(b[0] == doctest::Approx(-std::numbers::pi / 2.0).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));

    const ChainParams p50 = ChainParams::periodic(50, 0.014, 0.0);
    const auto c = initial_guess(p50, 1.618);
    for (std::size_t i = 1; i < c.size(); ++i)
        CHECK(c[i] - c[i - 1] == doctest::Approx(2.0 * std::numbers::pi / 1.618).epsilon(1e-13));

    CHECK_THROWS_AS(initial_guess(p50, 0.0), DomainError);
}

TEST_CASE("two ions relax to the analytic separation") {
    const double omega = 0.014;
    const ChainParams p = ChainParams::periodic(2, omega, 0.0);
    const auto c = relax(p, std::vector<double>{-10.0, 10.0}, RelaxSettings{});
    REQUIRE(c.converged);
    const double d = std::cbrt(2.0 / (omega * omega));
    CHECK(c.positions[0] == doctest::Approx(-d / 2.0).epsilon(1e-8));
    CHECK(c.positions[1] == doctest::Approx(d / 2.0).epsilon(1e-8));
    CHECK(c.grad_inf_norm <= 1e-10);
}

TEST_CASE("single ion in lattice plus trap relaxes to the origin") {
    const ChainParams p = ChainParams::periodic(1, 0.1, 0.2);
    const auto c = relax(p, std::vector<double>{2.0}, RelaxSettings{});
    REQUIRE(c.converged);
    CHECK(std::abs(c.positions[0]) < 1e-8);
}

TEST_CASE("relax from the uniform guess is close to the multi-start best") {
    const ChainParams p = ChainParams::periodic(50, 0.014, 0.03);
    RelaxSettings settings;
    const auto single = relax(p, initial_guess(p, golden_mean), settings);
    REQUIRE(single.converged);
    CHECK(single.grad_inf_norm <= settings.grad_tolerance);

    settings.n_starts = 20;
    const auto multi = ground_state(p, settings, golden_mean);
    REQUIRE(multi.best.has_value());
    CHECK(multi.best->energy <= single.energy + 1e-12);
    // quasi-degenerate landscape near the transition: agreement within 1%
    CHECK((single.energy - multi.best->energy) / std::abs(single.energy) < 0.01);
}

TEST_CASE("relaxed energies descend monotonically") {
    const ChainParams p = ChainParams::periodic(12, 0.03, 0.15);
    std::vector<double> trace;
    RelaxSettings settings;
    const auto c = relax(p, initial_guess(p, golden_mean), settings, &trace);
    REQUIRE(c.converged);
    REQUIRE(trace.size() > 1);
    for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] <= trace[i - 1] + 1e-12 * (1.0 + std::abs(trace[i - 1])));
}

TEST_CASE("converged configurations are certified minima and stay ordered") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 5 + static_cast<int>(rng.next_u64() % 10);
        const ChainParams p = ChainParams::periodic(n, 0.02, rng.uniform(0.0, 0.25));
        const auto start = perturbed_start(initial_guess(p, golden_mean), 0.3, rng.next_u64());
        const auto c = relax(p, start, RelaxSettings{});
        REQUIRE(c.converged);
        for (std::size_t i = 1; i < c.positions.size(); ++i)
            CHECK(c.positions[i] > c.positions[i - 1]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian(p, c.positions),
                                                           Eigen::EigenvaluesOnly);
        CHECK(eig.eigenvalues()(0) >= -1e-10);
    }
}

TEST_CASE("iteration budget exhaustion reports non-convergence") {
    const ChainParams p = ChainParams::periodic(20, 0.014, 0.1);
    RelaxSettings settings;
    settings.max_iterations = 3;
    const auto c = relax(p, initial_guess(p, golden_mean), settings);
    CHECK(!c.converged);
    CHECK(c.n_iterations <= 3);
}

TEST_CASE("ground_state catalogs") {
    SUBCASE("convex landscape at K=0 has exactly one minimum") {
        const ChainParams p = ChainParams::periodic(20, 0.014, 0.0);
        RelaxSettings settings;
        settings.n_starts = 15;
        const auto g = ground_state(p, settings, golden_mean);
        REQUIRE(g.best.has_value());
        CHECK(g.catalog.n_distinct == 1);
    }
    SUBCASE("two ions always give one minimum") {
        const ChainParams p = ChainParams::periodic(2, 0.014, 0.2);
        RelaxSettings settings;
        settings.n_starts = 10;
        const auto g = ground_state(p, settings, golden_mean);
        CHECK(g.catalog.n_distinct == 1);
    }
    SUBCASE("pinned phase has several quasi-degenerate minima") {
        const ChainParams p = ChainParams::periodic(20, 0.03, 0.2);
        RelaxSettings settings;
        settings.n_starts = 40;
        const auto g = ground_state(p, settings, golden_mean);
        REQUIRE(g.best.has_value());
        CHECK(g.catalog.n_distinct >= 3);
        REQUIRE(g.catalog.energy_gaps.size() == g.catalog.configurations.size());
        CHECK(g.catalog.energy_gaps.front() == 0.0);
        for (std::size_t i = 1; i < g.catalog.energy_gaps.size(); ++i)
            CHECK(g.catalog.energy_gaps[i] >= g.catalog.energy_gaps[i - 1] - 1e-14);
    }
}

TEST_CASE("ground_state is deterministic bit for bit") {
    const ChainParams p = ChainParams::periodic(15, 0.03, 0.2);
    RelaxSettings settings;
    settings.n_starts = 10;
    settings.seed = 4;
    const auto a = ground_state(p, settings, golden_mean);
    const auto b = ground_state(p, settings, golden_mean);
    REQUIRE(a.catalog.n_distinct == b.catalog.n_distinct);
    for (int i = 0; i < a.catalog.n_distinct; ++i) {
        CHECK(a.catalog.configurations[static_cast<std::size_t>(i)].positions ==
              b.catalog.configurations[static_cast<std::size_t>(i)].positions);
        CHECK(a.catalog.configurations[static_cast<std::size_t>(i)].energy ==
              b.catalog.configurations[static_cast<std::size_t>(i)].energy);
    }
}

TEST_CASE("catalog minima come in parity pairs") {
    const ChainParams p = ChainParams::periodic(14, 0.03, 0.2);
    RelaxSettings settings;
    settings.n_starts = 20;
    const auto g = ground_state(p, settings, golden_mean);
    REQUIRE(g.best.has_value());
    for (const auto& config : g.catalog.configurations) {
        const auto mirror = test::mirrored(config.positions);
        const auto relaxed = relax(p, mirror, settings);
        REQUIRE(relaxed.converged);
        CHECK(relaxed.energy == doctest::Approx(config.energy).epsilon(1e-10));
        // the mirror is itself (numerically) stationary
        CHECK(inf_norm(gradient(p, mirror)) < 1e-9);
    }
}

TEST_CASE("central density of uniform chains") {
    std::vector<double> x(30);
    for (int i = 0; i < 30; ++i)
        x[static_cast<std::size_t>(i)] = i * (2.0 * std::numbers::pi / 1.618);
    CHECK(central_density(x) == doctest::Approx(1.618).epsilon(1e-12));
    for (int i = 0; i < 30; ++i)
        x[static_cast<std::size_t>(i)] = i * (2.0 * std::numbers::pi);
    CHECK(central_density(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(central_density(std::vector<double>{0.0, 1.0}), DomainError);
}

TEST_CASE("relaxed 50-ion chain holds near-golden central density") {
    const ChainParams p = ChainParams::periodic(50, 0.014, 0.03);
    const auto c = relax(p, initial_guess(p, golden_mean), RelaxSettings{});
    REQUIRE(c.converged);
    CHECK(central_density(c) == doctest::Approx(1.618).epsilon(0.05));
}

TEST_CASE("rotation number") {
    std::vector<double> x(40);
    for (int i = 0; i < 40; ++i)
        x[static_cast<std::size_t>(i)] = i * 2.0 * std::numbers::pi;
    CHECK(rotation_number(x) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 40; ++i)
        x[static_cast<std::size_t>(i)] = i * (2.0 * std::numbers::pi / 1.618);
    CHECK(rotation_number(x) == doctest::Approx(1.618).epsilon(1e-12));
    CHECK_THROWS_AS(rotation_number(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("rotation number agrees with central density on a relaxed chain") {
    const ChainParams p = ChainParams::periodic(50, 0.014, 0.03);
    const auto c = relax(p, initial_guess(p, golden_mean), RelaxSettings{});
    REQUIRE(c.converged);
    const int lo = 50 / 3, hi = 100 / 3;
    const std::span<const double> mid(c.positions.data() + lo, static_cast<std::size_t>(hi - lo));
    CHECK(rotation_number(mid) ==
          doctest::Approx(central_density(c)).epsilon(0.02));
}

TEST_CASE("trap calibration hits the target density band") {
    const auto cal = calibrate_trap(50, golden_mean, 0.03, 0.005, RelaxSettings{});
    REQUIRE(cal.ok);
    CHECK(cal.omega_tr == doctest::Approx(0.014).epsilon(0.20));
    CHECK(std::abs(cal.density - golden_mean) <= 0.005 * golden_mean);
}

TEST_CASE("calibration input validation") {
    CHECK_THROWS_AS(calibrate_trap(2, golden_mean, 0.03), DomainError);
    CHECK_THROWS_AS(calibrate_trap(50, -1.0, 0.03), DomainError);
    CHECK_THROWS_AS(calibrate_trap(50, golden_mean, 0.03, 0.0), DomainError);
}

TEST_CASE("calibration reports failure when no bracket exists") {
    // density 200 would need omega_tr far above the allowed [1e-6, 1] window
    const auto cal = calibrate_trap(5, 200.0, 0.0, 0.005, RelaxSettings{});
    CHECK(!cal.ok);
}

TEST_CASE("ground_state reports failure when no start converges") {
    const ChainParams p = ChainParams::periodic(20, 0.014, 0.1);
    RelaxSettings settings;
    settings.max_iterations = 1;
    settings.n_starts = 3;
    const auto g = ground_state(p, settings, golden_mean);
    CHECK(!g.best.has_value());
    CHECK(g.catalog.n_distinct == 0);
}
