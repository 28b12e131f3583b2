#include <catch_amalgamated.hpp>

#include "frontlab/nonlinearity.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace frontlab;
using Catch::Approx;

TEST_CASE("cubic evaluation at known points", "[nonlinearity]") {
    const auto n = Nonlinearity::cubic(0.25);
    REQUIRE(eval_f(n, 0.0) == 0.0);
    REQUIRE(eval_f(n, 0.25) == 0.0);
    REQUIRE(eval_f(n, 0.5) == Approx(0.0625).margin(1e-15));
    REQUIRE(eval_f_prime(n, 0.0) == Approx(-0.25).margin(1e-15));
    REQUIRE(eval_f_prime(n, 1.0) == Approx(-0.75).margin(1e-15));
    REQUIRE(eval_f_prime(n, 5.0 / 12.0) == Approx(13.0 / 48.0).margin(1e-15));
}

TEST_CASE("sup norm of f' over [0,1]", "[nonlinearity]") {
    REQUIRE(sup_norm_f_prime(Nonlinearity::cubic(0.25)) == Approx(0.75).margin(1e-12));
    REQUIRE(sup_norm_f_prime(Nonlinearity::cubic(0.4)) == Approx(0.6).margin(1e-12));
    REQUIRE(sup_norm_f_prime(Nonlinearity::cubic(0.1)) == Approx(0.9).margin(1e-12));
}

TEST_CASE("integral of f", "[nonlinearity]") {
    REQUIRE(integral_f(Nonlinearity::cubic(0.25)) == Approx(1.0 / 24.0).margin(1e-14));
    const double theta = 0.5 - 1e-9;
    REQUIRE(integral_f(Nonlinearity::cubic(theta)) == Approx((1 - 2 * theta) / 12).epsilon(1e-5));
    REQUIRE(integral_f(Nonlinearity::cubic(theta)) > 0.0);
    try {
        integral_f(Nonlinearity::cubic(0.6));
        FAIL("expected NotInvading");
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::NotInvading);
    }
}

TEST_CASE("validation reports", "[nonlinearity]") {
    REQUIRE(validate(Nonlinearity::cubic(0.25)).all_pass());

    const auto bad = validate(Nonlinearity::cubic(0.6));
    REQUIRE_FALSE(bad.all_pass());
    int failures = 0;
    for (const auto& c : bad.checks)
        if (!c.pass) {
            ++failures;
            REQUIRE(c.name == "integral of f > 0");
        }
    REQUIRE(failures == 1);

    SECTION("tabulated copy of the cubic on 201 knots") {
        std::vector<double> u, f;
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            u.push_back(x);
            f.push_back(x * (1 - x) * (x - 0.25));
        }
        const auto tab = Nonlinearity::tabulated(u, f, 0.25);
        REQUIRE(validate(tab).all_pass());
        for (double x : {0.013, 0.4, 0.777, 1.05, -0.02})
            REQUIRE(tab.f(x) == Approx(x * (1 - x) * (x - 0.25)).margin(1e-13));
    }

    SECTION("a sign violation carries its witness") {
        std::vector<double> u, f;
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            u.push_back(x);
            f.push_back(x * (1 - x) * (x - 0.25) * (x - 0.6) * (x - 0.7) * 10);
        }
        const auto rep = validate(Nonlinearity::tabulated(u, f, 0.25));
        REQUIRE_FALSE(rep.all_pass());
        bool found = false;
        for (const auto& c : rep.checks)
            if (c.name == "f > 0 on (theta, 1)") {
                REQUIRE_FALSE(c.pass);
                REQUIRE(c.witness >= 0.6 - 1e-12);
                REQUIRE(c.witness < 0.7);
                found = true;
            }
        REQUIRE(found);
    }
}

TEST_CASE("theta outside (0,1) is rejected", "[nonlinearity]") {
    REQUIRE_THROWS_AS(Nonlinearity::cubic(1.2), Error);
    REQUIRE_THROWS_AS(Nonlinearity::cubic(0.0), Error);
}

TEST_CASE("properties over random theta", "[nonlinearity][property]") {
    oracle::Rng rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
        const double theta = rng.uniform(0.01, 0.49);
        const auto n = Nonlinearity::cubic(theta);
        REQUIRE(validate(n).all_pass());
        REQUIRE(integral_f(n) == Approx((1 - 2 * theta) / 12).margin(1e-12));
        for (int k = 0; k < 20; ++k) {
            const double u = rng.uniform(1e-5, 1 - 1e-5);
            const double fd = (n.f(u + 1e-5) - n.f(u - 1e-5)) / 2e-5;
            REQUIRE(std::abs(n.f_prime(u) - fd) <= 1e-8);
            if (u < theta) REQUIRE(n.f(u) < 0.0);
            if (u > theta) REQUIRE(n.f(u) > 0.0);
        }
    }
}
