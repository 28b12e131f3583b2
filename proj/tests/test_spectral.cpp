#include <catch_amalgamated.hpp>

#include "frontlab/spectral.hpp"
#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace frontlab;
using Catch::Approx;

namespace {

std::shared_ptr<const WaveProfile> exact_profile(double h, double theta = 0.25) {
    return std::make_shared<const WaveProfile>(exact_cubic_wave(theta, WaveGrid::make(-40.0, 40.0, h)));
}

std::vector<double> random_grid_function(oracle::Rng& rng, const std::vector<double>& xi) {
    std::vector<double> psi(xi.size());
    const double a = rng.normal(), b = rng.normal(), x0 = rng.uniform(-10, 10), s = rng.uniform(0.5, 5);
    for (std::size_t i = 0; i < xi.size(); ++i)
        psi[i] = a * std::exp(-(xi[i] - x0) * (xi[i] - x0) / (2 * s * s)) + b * std::tanh(xi[i] / s) +
                 0.1 * rng.normal() * std::exp(-0.1 * std::abs(xi[i]));
    return psi;
}

}  // namespace

TEST_CASE("projection context normalization", "[spectral]") {
    const auto p = exact_profile(0.01);
    for (auto rule : {Quadrature::Trapezoid, Quadrature::Simpson}) {
        const auto ctx = build_projection(p, rule);
        REQUIRE(ctx.Lambda > 0.0);
        REQUIRE(std::abs(pair_e_star(ctx, p->phi_prime) - 1.0) <= 1e-14);
        REQUIRE(pair_e_star(ctx, std::vector<double>(p->size(), 0.0)) == 0.0);
    }
}

TEST_CASE("Lambda matches an adaptive quadrature of the closed form", "[spectral][oracle]") {
    const auto p = exact_profile(0.01);
    const auto ctx = build_projection(p);
    const double c = p->c;
    const double ref = oracle::adaptive_simpson(
        [&](double x) {
            const double d = oracle::cubic_exact_dphi(0.25, x);
            return std::exp(c * x) * d * d;
        },
        -40.0, 40.0, 1e-13);
    REQUIRE(ctx.Lambda == Approx(ref).margin(1e-8));

    SECTION("grid refinement changes Lambda by at most O(h^2)") {
        const auto coarse = build_projection(exact_profile(0.2));
        const auto fine = build_projection(exact_profile(0.1));
        REQUIRE(std::abs(coarse.Lambda - fine.Lambda) <= 0.2 * 0.2);
    }
}

TEST_CASE("projector algebra on random grid functions", "[spectral][property]") {
    const auto p = exact_profile(0.01);
    const auto ctx = build_projection(p);
    oracle::Rng rng(424242);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto psi = random_grid_function(rng, p->xi);
        const auto P = project_kernel(ctx, psi);
        const auto Q = project_range(ctx, psi);
        const auto PP = project_kernel(ctx, P);
        const auto QQ = project_range(ctx, Q);
        const auto PQ = project_kernel(ctx, Q);
        const auto QP = project_range(ctx, P);
        const double scale = std::max(1.0, max_abs(psi));
        for (std::size_t i = 0; i < psi.size(); ++i) {
            worst = std::max(worst, std::abs(PP[i] - P[i]) / scale);
            worst = std::max(worst, std::abs(QQ[i] - Q[i]) / scale);
            worst = std::max(worst, std::abs(PQ[i]) / scale);
            worst = std::max(worst, std::abs(QP[i]) / scale);
            worst = std::max(worst, std::abs(P[i] + Q[i] - psi[i]) / scale);
        }
        worst = std::max(worst, std::abs(pair_e_star(ctx, Q)) / scale);
    }
    REQUIRE(worst <= 1e-12);

    SECTION("P fixes phi'") {
        const auto P = project_kernel(ctx, p->phi_prime);
        for (std::size_t i = 0; i < P.size(); ++i) REQUIRE(std::abs(P[i] - p->phi_prime[i]) <= 1e-14);
    }
}

TEST_CASE("shape mismatch is reported", "[spectral]") {
    const auto ctx = build_projection(exact_profile(0.1));
    try {
        pair_e_star(ctx, std::vector<double>(3, 1.0));
        FAIL("expected ShapeMismatch");
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::ShapeMismatch);
    }
    REQUIRE_THROWS_AS(project_range(ctx, std::vector<double>(5)), Error);
}

TEST_CASE("symmetrized operator", "[spectral]") {
    const auto p = exact_profile(0.05);
    const auto op = symmetrized_operator(*p);
    REQUIRE(op.potential.back() == Approx(p->c * p->c / 4 + 0.25).margin(1e-12));
    REQUIRE(op.matrix.off.size() + 1 == op.matrix.diag.size());

    SECTION("residual on the conjugated kernel mode converges at second order") {
        std::vector<double> res;
        for (double h : {0.1, 0.05, 0.025}) {
            const auto q = exact_profile(h);
            const auto o = symmetrized_operator(*q);
            const auto g = conjugated_kernel_mode(*q);
            std::vector<double> ag(g.size());
            o.matrix.multiply(g, ag);
            res.push_back(max_abs(ag) / max_abs(g));
        }
        REQUIRE(std::log2(res[0] / res[1]) >= 1.9);
        REQUIRE(std::log2(res[1] / res[2]) >= 1.9);
    }
}

TEST_CASE("Sturm bisection agrees with a dense eigensolver", "[spectral][oracle]") {
    const auto p = std::make_shared<const WaveProfile>(exact_cubic_wave(0.25, WaveGrid::make(-20.0, 20.0, 0.1)));
    const auto op = symmetrized_operator(*p);
    const std::size_t m = op.matrix.size();
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        dense(i, i) = op.matrix.diag[i];
        if (i + 1 < m) dense(i, i + 1) = dense(i + 1, i) = op.matrix.off[i];
    }
    REQUIRE((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    for (std::size_t k : {0u, 1u, 2u, 7u})
        REQUIRE(tridiagonal_eigenvalue(op.matrix, k) == Approx(es.eigenvalues()[k]).margin(1e-9));
    const auto v = tridiagonal_eigenvector(op.matrix, tridiagonal_eigenvalue(op.matrix, 1));
    Eigen::VectorXd ref = es.eigenvectors().col(1);
    double dot = 0.0;
    for (std::size_t i = 0; i < m; ++i) dot += v[i] * ref[i];
    REQUIRE(std::abs(dot) == Approx(1.0).margin(1e-9));
}

TEST_CASE("spectral gap of the cubic wave", "[spectral]") {
    const auto rep = spectral_gap(*exact_profile(0.005));
    REQUIRE(std::abs(rep.rho0) <= 1e-3);
    REQUIRE(rep.ground_cosine >= 0.999);
    REQUIRE(rep.rho1 > 0.0);
    REQUIRE(rep.varpi == Approx(rep.rho1 / 0.75).margin(1e-12));

    SECTION("gap positive for several thresholds") {
        for (double theta : {0.1, 0.25, 0.4}) {
            const auto g = spectral_gap(*exact_profile(0.02, theta));
            REQUIRE(g.rho1 > 0.0);
        }
    }
}

TEST_CASE("coercivity over random orthogonalized functions", "[spectral][property]") {
    const auto p = exact_profile(0.02);
    const auto gap = spectral_gap(*p);
    const std::vector<double> zetas{0.0, 0.05, 0.1};
    const auto rep = coercivity_check(*p, gap, zetas, 120, 99);
    REQUIRE(rep.samples == 120);
    REQUIRE(rep.pass);
    REQUIRE(rep.thresholds.size() == 3);
    REQUIRE(rep.thresholds[1].amplitude == Approx(-(gap.rho1 - 0.05) / 0.75));

    const auto op = symmetrized_operator(*p);
    REQUIRE(rayleigh_quotient(op, gap.second_vector) == Approx(gap.lambda2).margin(1e-8));
    REQUIRE(std::abs(rayleigh_quotient(op, gap.ground_vector) - gap.rho0) <= 1e-8);
}

TEST_CASE("semigroup decay on the range", "[spectral]") {
    const auto p = exact_profile(0.02);
    const auto ctx = build_projection(p);
    const auto gap = spectral_gap(*p);

    SECTION("range-projected bump decays at the gap rate") {
        std::vector<double> bump(p->size());
        for (std::size_t i = 0; i < bump.size(); ++i) bump[i] = std::exp(-p->xi[i] * p->xi[i]);
        const auto rep = semigroup_decay_check(ctx, 0.9 * gap.rho1, project_range(ctx, bump));
        REQUIRE(rep.fitted_rate >= 0.9 * gap.rho1);
        REQUIRE(rep.pass);
    }
    SECTION("kernel mode does not decay") {
        const auto rep = semigroup_decay_check(ctx, 0.5 * gap.rho1, p->phi_prime, 20.0);
        REQUIRE(rep.norm.back() == Approx(rep.norm.front()).epsilon(0.01));
    }
    SECTION("zero stays zero") {
        const auto rep = semigroup_decay_check(ctx, 0.1, std::vector<double>(p->size(), 0.0), 5.0);
        REQUIRE(rep.identically_zero);
        for (double v : rep.norm) REQUIRE(v == 0.0);
    }
}
