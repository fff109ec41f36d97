#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "ionchain/chain_model.hpp"
#include "ionchain/errors.hpp"
#include "ionchain/numerics.hpp"
#include "support.hpp"

using namespace ionchain;

TEST_CASE("single ion energies") {
    const std::vector<double> x = {0.0};
    CHECK(energy(ChainParams::periodic(1, 0.014, 0.0), x) == 0.0);
    CHECK(energy(ChainParams::periodic(1, 0.0, 0.2), x) == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("two-ion analytic equilibrium") {
    const double omega = 0.014;
    const double d = std::cbrt(2.0 / (omega * omega));
    CHECK(d == doctest::Approx(21.68).epsilon(1e-3));
    const ChainParams p = ChainParams::periodic(2, omega, 0.0);
    const std::vector<double> x = {-d / 2.0, d / 2.0};

    CHECK(energy(p, x) == doctest::Approx(omega * omega * d * d / 4.0 + 1.0 / d).epsilon(1e-14));

    const auto g = gradient(p, x);
    CHECK(std::abs(g[0]) < 1e-12);
    CHECK(std::abs(g[1]) < 1e-12);

    // the analytic d is the minimum of the two-ion energy over d
    auto e_of = [&](double dd) {
        return energy(p, std::vector<double>{-dd / 2.0, dd / 2.0});
    };
    CHECK(e_of(d) < e_of(0.95 * d));
    CHECK(e_of(d) < e_of(1.05 * d));

    const Eigen::MatrixXd h = hessian(p, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(omega * omega).epsilon(1e-10));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(3.0 * omega * omega).epsilon(1e-10));
}

TEST_CASE("single-ion gradient vanishes at the origin") {
    for (double k : {0.0, 0.1, 0.3}) {
        const auto g = gradient(ChainParams::periodic(1, 0.05, k), std::vector<double>{0.0});
        CHECK(g[0] == 0.0);
    }
}

TEST_CASE("gradient matches finite differences of the energy") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 7);
        const auto x = test::random_configuration(n, rng);
        const ChainParams p = ChainParams::periodic(n, rng.uniform(0.005, 0.02), rng.uniform(0.0, 0.3));
        const auto g = gradient(p, x);
        const auto g_fd = test::fd_gradient(p, x, 1e-6);
        double ref = inf_norm(g);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(g[i] - g_fd[i]) / ref < 1e-6);
    }
}

TEST_CASE("hessian matches finite differences of the gradient") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 6);
        const auto x = test::random_configuration(n, rng);
        const ChainParams p = ChainParams::periodic(n, rng.uniform(0.005, 0.02), rng.uniform(0.0, 0.3));
        const Eigen::MatrixXd h = hessian(p, x);
        const Eigen::MatrixXd h_fd = test::fd_hessian(p, x, 1e-5);
        const double scale = h.cwiseAbs().maxCoeff();
        CHECK(((h - h_fd).cwiseAbs().maxCoeff() / scale) < 1e-5);
    }
}

TEST_CASE("energy and gradient are parity even") {
    SplitMix64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 8);
        const auto x = test::random_configuration(n, rng);
        const auto m = test::mirrored(x);
        const ChainParams p = ChainParams::periodic(n, rng.uniform(0.005, 0.02), rng.uniform(0.0, 0.3));
        const double ex = energy(p, x);
        CHECK(energy(p, m) == doctest::Approx(ex).epsilon(1e-13));
        const auto gx = gradient(p, x);
        const auto gm = gradient(p, m);
        for (std::size_t i = 0; i < gx.size(); ++i)
            CHECK(gm[i] == doctest::Approx(-gx[gx.size() - 1 - i]).epsilon(1e-10));
    }
}

TEST_CASE("hessian is exactly symmetric and rows sum to the on-site curvature") {
    SplitMix64 rng(44);
    const int n = 7;
    const auto x = test::random_configuration(n, rng);
    const double omega = 0.01, k = 0.2;
    const ChainParams p = ChainParams::periodic(n, omega, k);
    const Eigen::MatrixXd h = hessian(p, x);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < n; ++i) {
        const double expected = omega * omega + k * std::cos(x[static_cast<std::size_t>(i)]);
        CHECK(h.row(i).sum() == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("free chain: energy is translation invariant and forces balance") {
    SplitMix64 rng(45);
    const int n = 6;
    const auto x = test::random_configuration(n, rng);
    SUBCASE("no lattice") {
        const ChainParams q = ChainParams::periodic(n, 0.0, 0.0);
        const double e0 = energy(q, x);
        auto shifted = x;
        for (double& xi : shifted)
            xi += 2.7;
        CHECK(energy(q, shifted) == doctest::Approx(e0).epsilon(1e-12));
        const auto g = gradient(q, x);
        CompensatedSum total;
        for (double gi : g)
            total.add(gi);
        CHECK(std::abs(total.value()) < 1e-10);
    }
    SUBCASE("with lattice the force sum equals the total lattice force") {
        const ChainParams q = ChainParams::periodic(n, 0.0, 0.25);
        const auto g = gradient(q, x);
        CompensatedSum total, lattice;
        for (std::size_t i = 0; i < x.size(); ++i) {
            total.add(g[i]);
            lattice.add(q.lattice_amplitude * std::sin(x[i]));
        }
        CHECK(std::abs(total.value() - lattice.value()) < 1e-10);
    }
}

TEST_CASE("invalid configurations are rejected") {
    const ChainParams p = ChainParams::periodic(3, 0.01, 0.1);
    CHECK_THROWS_AS(energy(p, std::vector<double>{0.0, 0.0, 1.0}), SingularityError);
    CHECK_THROWS_AS(energy(p, std::vector<double>{1.0, 0.0, 2.0}), DomainError);
    CHECK_THROWS_AS(energy(p, std::vector<double>{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(gradient(p, std::vector<double>{2.0, 1.0, 3.0}), DomainError);
    CHECK_THROWS_AS(hessian(p, std::vector<double>{0.0, 1.0, 1.0}), SingularityError);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(ChainParams::periodic(0, 0.01, 0.1), DomainError);
    CHECK_THROWS_AS(ChainParams::periodic(5, 0.01, -0.1), DomainError);
    CHECK_THROWS_AS(ChainParams::periodic(5, -0.01, 0.1), DomainError);
    DisorderParams d;
    d.relative_halfwidth = 1.0;
    CHECK_THROWS_AS(ChainParams::microtraps(5, d), DomainError);
    d.relative_halfwidth = 0.25;
    d.trap_stiffness = 0.0;
    CHECK_THROWS_AS(ChainParams::microtraps(5, d), DomainError);
}

TEST_CASE("microtrap centers are deterministic and bounded") {
    DisorderParams d;
    d.seed = 77;
    const auto a = trap_centers(d, 64);
    const auto b = trap_centers(d, 64);
    CHECK(a == b);  // bit-identical
    const double lo = d.mean_spacing * (1.0 - d.relative_halfwidth);
    const double hi = d.mean_spacing * (1.0 + d.relative_halfwidth);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double s = a[i] - a[i - 1];
        CHECK(s >= lo);
        CHECK(s <= hi);
    }
    d.seed = 78;
    CHECK(trap_centers(d, 64) != a);
}

TEST_CASE("microtrap energy and gradient agree with finite differences") {
    DisorderParams d;
    d.seed = 5;
    const int n = 6;
    const ChainParams p = ChainParams::microtraps(n, d);
    auto x = trap_centers(d, n);
    SplitMix64 rng(46);
    for (double& xi : x)
        xi += rng.uniform(-0.5, 0.5);
    const auto g = gradient(p, x);
    const auto g_fd = test::fd_gradient(p, x, 1e-6);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g[i] == doctest::Approx(g_fd[i]).epsilon(1e-6));
    const Eigen::MatrixXd h = hessian(p, x);
    const Eigen::MatrixXd h_fd = test::fd_hessian(p, x, 1e-5);
    CHECK(((h - h_fd).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff()) < 1e-5);
}
