#include <catch_amalgamated.hpp>

#include "frontlab/wave.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>

using namespace frontlab;
using Catch::Approx;

namespace {

double max_error_vs_exact(const WaveProfile& p, double theta) {
    double err = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        err = std::max(err, std::abs(p.phi[i] - oracle::cubic_exact_phi(theta, p.xi[i])));
    return err;
}

}  // namespace

TEST_CASE("shooting oracle agrees with the closed-form cubic speed", "[wave][oracle]") {
    const double theta = 0.25;
    const double c = oracle::shooting_speed([&](double u) { return u * (1 - u) * (u - theta); }, theta - 1.0,
                                            0.0, 1.0);
    REQUIRE(c == Approx(std::sqrt(2.0) / 4.0).margin(1e-6));
}

TEST_CASE("grid construction puts 0 on a node", "[wave]") {
    const auto g = WaveGrid::make(-40.0, 40.0, 0.01);
    REQUIRE(g.n_points == 8001);
    REQUIRE(g.node(g.zero_index()) == Approx(0.0).margin(1e-12));
    REQUIRE_THROWS_AS(WaveGrid::make(1.0, 40.0, 0.01), Error);
}

TEST_CASE("Newton wave solve matches the cubic oracle", "[wave]") {
    const auto grid = WaveGrid::make(-40.0, 40.0, 0.01);
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = solve_wave(Nonlinearity::cubic(0.25), grid, {1e-10});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(std::abs(p.c - std::sqrt(2.0) / 4.0) <= 1e-5);
    REQUIRE(max_error_vs_exact(p, 0.25) <= 1e-4);
    REQUIRE(p.residual_inf <= 1e-10);
    REQUIRE(seconds <= 10.0);

    SECTION("profile invariants") {
        REQUIRE(p.phi[grid.zero_index()] == Approx(0.25).margin(1e-12));
        for (std::size_t i = 0; i < p.size(); ++i) {
            REQUIRE(p.phi_prime[i] < 0.0);
            if (i > 0) REQUIRE(p.phi[i] < p.phi[i - 1]);
            if (i > 0 && i + 1 < p.size()) {
                REQUIRE(p.phi[i] > 0.0);
                REQUIRE(p.phi[i] < 1.0);
            }
        }
        REQUIRE(std::abs(p.lambda * p.lambda + p.c * p.lambda + p.nonlinearity.f_prime(0.0)) <= 1e-10);
        REQUIRE(std::abs(p.mu * p.mu + p.c * p.mu + p.nonlinearity.f_prime(1.0)) <= 1e-10);
    }

    SECTION("phi' agrees with centered differences of phi to O(h^2)") {
        const double h = grid.h();
        double err = 0.0;
        for (std::size_t i = 1; i + 1 < p.size(); ++i)
            err = std::max(err, std::abs(p.phi_prime[i] - (p.phi[i + 1] - p.phi[i - 1]) / (2 * h)));
        REQUIRE(err <= 0.1 * h * h);
    }
}

TEST_CASE("wave solve converges under grid halving", "[wave][property]") {
    const auto nl = Nonlinearity::cubic(0.25);
    double prev = 0.0;
    for (double h : {0.4, 0.2, 0.1}) {
        const auto p = solve_wave(nl, WaveGrid::make(-40.0, 40.0, h), {1e-11});
        const double err = max_error_vs_exact(p, 0.25);
        if (prev > 0.0) REQUIRE(prev / err >= 3.5);
        prev = err;
    }
}

TEST_CASE("speed is insensitive to the initial guess translation", "[wave][property]") {
    const auto nl = Nonlinearity::cubic(0.3);
    const auto grid = WaveGrid::make(-40.0, 40.0, 0.05);
    const auto a = solve_wave(nl, grid, {1e-11});
    for (double shift : {-3.0, 2.0, 5.0}) {
        WaveSolveOptions opt;
        opt.tol = 1e-11;
        opt.initial_shift = shift;
        const auto b = solve_wave(nl, grid, opt);
        REQUIRE(std::abs(a.c - b.c) <= 1e-8);
        REQUIRE(max_abs([&] {
                    std::vector<double> d(a.size());
                    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.phi[i] - b.phi[i];
                    return d;
                }()) <= 1e-8);
    }
}

TEST_CASE("reflected cubic gives the opposite speed", "[wave]") {
    const auto grid = WaveGrid::make(-40.0, 40.0, 0.05);
    const auto a = solve_wave(Nonlinearity::cubic(0.25), grid);
    const auto b = solve_wave(Nonlinearity::cubic(0.75), grid);
    REQUIRE(a.c == Approx(-b.c).margin(1e-8));
}

TEST_CASE("decay rates", "[wave]") {
    const auto n = Nonlinearity::cubic(0.25);
    const auto r = decay_rates(n, std::sqrt(2.0) / 4.0);
    REQUIRE(r.lambda == Approx(-1.0 / std::sqrt(2.0)).margin(1e-14));
    REQUIRE(r.mu == Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
    const auto sym = decay_rates(-1.0, -1.0, 0.0);
    REQUIRE(sym.lambda == -1.0);
    REQUIRE(sym.mu == 1.0);
}

TEST_CASE("closed-form cubic wave", "[wave]") {
    const auto grid = WaveGrid::make(-40.0, 40.0, 0.01);
    const auto p = exact_cubic_wave(0.25, grid);
    REQUIRE(p.phi[grid.zero_index()] == 0.25);
    REQUIRE(p.c == Approx(std::sqrt(2.0) / 4.0).margin(1e-15));
    // Analytic residual of phi'' + c phi' + f(phi) with phi'' = -(1 - 2 phi) phi' / sqrt(2).
    double analytic = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double u = p.phi[i], du = p.phi_prime[i];
        const double d2 = -(1.0 - 2.0 * u) * du / std::sqrt(2.0);
        analytic = std::max(analytic, std::abs(d2 + p.c * du + u * (1 - u) * (u - 0.25)));
    }
    REQUIRE(analytic <= 1e-12);
    REQUIRE(p.residual_inf <= 1e-6);
}

TEST_CASE("tail estimates", "[wave]") {
    const auto grid = WaveGrid::make(-40.0, 40.0, 0.01);
    SECTION("closed form") {
        const auto rep = check_tail_estimates(exact_cubic_wave(0.25, grid));
        REQUIRE(rep.slope_phi == Approx(-1 / std::sqrt(2.0)).margin(1e-6));
        REQUIRE(rep.slope_one_minus_phi == Approx(1 / std::sqrt(2.0)).margin(1e-6));
        REQUIRE(rep.pass);
    }
    SECTION("numerical solution") {
        const auto rep = check_tail_estimates(solve_wave(Nonlinearity::cubic(0.25), grid));
        REQUIRE(rep.max_relative_error <= 0.02);
        REQUIRE(rep.characteristic_residual_lambda <= 1e-10);
        REQUIRE(rep.characteristic_residual_mu <= 1e-10);
        REQUIRE(rep.C1 > 0.0);
        REQUIRE(rep.C2 >= rep.C1);
        REQUIRE(rep.pass);
    }
    SECTION("constant profile is rejected") {
        auto p = exact_cubic_wave(0.25, grid);
        std::fill(p.phi.begin(), p.phi.end(), 0.5);
        std::fill(p.phi_prime.begin(), p.phi_prime.end(), 0.0);
        REQUIRE_THROWS_AS(check_tail_estimates(p), Error);
    }
    SECTION("coarse grid window") {
        const auto coarse = exact_cubic_wave(0.25, WaveGrid::make(-10.0, 10.0, 0.5));
        try {
            check_tail_estimates(coarse);
            FAIL("expected FitWindowUnderResolved");
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::FitWindowUnderResolved);
        }
    }
}

TEST_CASE("rate constraint", "[wave]") {
    const auto p = exact_cubic_wave(0.25, WaveGrid::make(-40.0, 40.0, 0.1));
    REQUIRE(rate_constraint_bound(p) == Approx(1 / std::sqrt(2.0) - std::sqrt(2.0) / 8).margin(1e-14));
    REQUIRE(check_rate_constraint(0.1, p));
    REQUIRE_FALSE(check_rate_constraint(0.6, p));
    REQUIRE_FALSE(check_rate_constraint(0.0, p));
}

TEST_CASE("grid too short is detected", "[wave]") {
    try {
        solve_wave(Nonlinearity::cubic(0.25), WaveGrid::make(-8.0, 8.0, 0.05));
        FAIL("expected GridTooShort");
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::GridTooShort);
    }
}

TEST_CASE("interpolant continues the tails", "[wave]") {
    const auto p = exact_cubic_wave(0.25, WaveGrid::make(-40.0, 40.0, 0.01));
    const WaveInterpolant w(p);
    for (double x : {-45.0, -3.3333, 0.0, 0.005, 12.71, 47.0}) {
        REQUIRE(w.value(x) == Approx(oracle::cubic_exact_phi(0.25, x)).epsilon(1e-9).margin(1e-12));
        REQUIRE(w.slope(x) == Approx(oracle::cubic_exact_dphi(0.25, x)).epsilon(1e-7).margin(1e-12));
    }
}
