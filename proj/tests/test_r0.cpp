#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "r0gp/r0.hpp"
#include "testutil.hpp"

using namespace r0gp;
using test::Rng;

namespace {

LinearizedEpidemic unattained_infimum_case() {
    Eigen::MatrixXd f(2, 2), v(2, 2);
    f << 0, 0, 1, 1;
    v << -1, 0, 0, -1;
    return {SquareMatrix(std::move(f)), SquareMatrix(std::move(v))};
}

LinearizedEpidemic scalar_case(double beta, double delta) {
    Eigen::MatrixXd f(1, 1), v(1, 1);
    f << beta;
    v << -delta;
    return {SquareMatrix(std::move(f)), SquareMatrix(std::move(v))};
}

/// Single-group SEIR block with closed-form R0 = beta s0 a / delta,
/// computed here through the explicit 2x2 inverse as an independent check.
double seir_block_r0_oracle(double beta_s0a, double gamma, double delta) {
    // V = [[-g, 0], [g, -d]], V^{-1} = [[-1/g, 0], [-1/d, -1/d]]
    // -F V^{-1} for F = [[0, b], [0, 0]] is [[b/d, b/d], [0, 0]]; radius b/d.
    const Eigen::Matrix2d vinv{{-1.0 / gamma, 0.0}, {-1.0 / delta, -1.0 / delta}};
    const Eigen::Matrix2d f{{0.0, beta_s0a}, {0.0, 0.0}};
    const Eigen::Matrix2d ngm = -f * vinv;
    return spectral_radius(SquareMatrix(Eigen::MatrixXd(ngm)));
}

}  // namespace

TEST_CASE("LinearizedEpidemic validates structure") {
    Eigen::MatrixXd f(2, 2), v(2, 2);
    f << 0, 0, 1, 1;
    v << -1, 0, 0, -1;
    SUBCASE("negative F rejected") {
        f(0, 1) = -0.5;
        CHECK_THROWS_AS(LinearizedEpidemic(SquareMatrix(f), SquareMatrix(v)), ContractError);
    }
    SUBCASE("non-Metzler V rejected") {
        v(0, 1) = -0.5;
        CHECK_THROWS_AS(LinearizedEpidemic(SquareMatrix(f), SquareMatrix(v)), ContractError);
    }
    SUBCASE("zero diagonal decay rejected") {
        v(1, 1) = 0.0;
        CHECK_THROWS_AS(LinearizedEpidemic(SquareMatrix(f), SquareMatrix(v)), ContractError);
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS_AS(LinearizedEpidemic(SquareMatrix::identity(3), SquareMatrix(v)),
                        ContractError);
    }
    SUBCASE("require_hurwitz flags an unstable V") {
        Eigen::MatrixXd vu(2, 2);
        vu << -1, 2, 2, -1;
        const LinearizedEpidemic lin{SquareMatrix(Eigen::MatrixXd::Zero(2, 2)), SquareMatrix(vu)};
        CHECK_THROWS_AS(lin.require_hurwitz(), ContractError);
    }
}

TEST_CASE("r0_eigen frozen examples") {
    CHECK(r0_eigen(scalar_case(0.3, 0.1)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r0_eigen(unattained_infimum_case()) == doctest::Approx(1.0).epsilon(1e-12));

    // Single-group SEIR: R0 = beta s0 a / delta, via the 2x2 closed form.
    const double beta_s0a = 0.25, gamma = 0.2, delta = 0.1;
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2, 2), v(2, 2);
    f(0, 1) = beta_s0a;
    v << -gamma, 0, gamma, -delta;
    const LinearizedEpidemic lin{SquareMatrix(f), SquareMatrix(v)};
    const double oracle = seir_block_r0_oracle(beta_s0a, gamma, delta);
    CHECK(oracle == doctest::Approx(beta_s0a / delta).epsilon(1e-12));
    CHECK(r0_eigen(lin) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("r0_bisection frozen examples") {
    CHECK(std::abs(r0_bisection(unattained_infimum_case(), 1e-8) - 1.0) <= 1e-8);
    CHECK(std::abs(r0_bisection(scalar_case(0.3, 0.1), 1e-9) - 3.0) <= 1e-9);

    // Zero infection matrix: F + rV is Hurwitz for every r > 0.
    const LinearizedEpidemic zero(SquareMatrix::zero(2),
                                  SquareMatrix(-Eigen::MatrixXd::Identity(2, 2)));
    CHECK(r0_bisection(zero, 1e-9) <= 1e-8);
    CHECK_THROWS_AS(r0_bisection(unattained_infimum_case(), 0.0), InputError);
}

TEST_CASE("r0_bisection diagnoses a missing bracket") {
    // Metzler with negative diagonal but not Hurwitz: F + rV is never stable,
    // which violates the preconditions and must surface as an error.
    Eigen::MatrixXd v(2, 2);
    v << -1, 2, 2, -1;
    const LinearizedEpidemic lin{SquareMatrix(Eigen::MatrixXd::Zero(2, 2)),
                                 SquareMatrix(v)};
    CHECK_THROWS_AS(r0_bisection(lin, 1e-9), SolverError);
}

TEST_CASE("r0_gp frozen examples") {
    CHECK(r0_gp(unattained_infimum_case()) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r0_gp(scalar_case(0.3, 0.1)) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("r0_gp matches r0_eigen on random 5x5 instances") {
    Rng rng(2024);
    for (int k = 0; k < 10; ++k) {
        const LinearizedEpidemic lin = test::random_linearized(rng, 5);
        const double reference = r0_eigen(lin);
        CHECK(r0_gp(lin) == doctest::Approx(reference).epsilon(1e-6));
    }
}

TEST_CASE("three characterizations agree on random instances") {
    Rng rng(7777);
    for (int k = 0; k < 60; ++k) {
        const Eigen::Index n = 1 + rng.index(10);
        const LinearizedEpidemic lin = test::random_linearized(rng, n);
        const double eig = r0_eigen(lin);
        const double bis = r0_bisection(lin, 1e-9);
        const double gp = r0_gp(lin);
        const double scale = std::max(1.0, eig);
        CHECK(std::abs(eig - bis) <= 1e-6 * scale);
        CHECK(std::abs(eig - gp) <= 1e-5 * scale);
    }
}

TEST_CASE("R0 scaling laws") {
    Rng rng(515);
    for (int k = 0; k < 40; ++k) {
        const Eigen::Index n = 1 + rng.index(8);
        const LinearizedEpidemic lin = test::random_linearized(rng, n);
        const double base = r0_eigen(lin);
        const double c = rng.uniform(0.1, 10.0);
        const LinearizedEpidemic scaled_f(SquareMatrix(c * lin.F().m()), lin.V());
        const LinearizedEpidemic scaled_v(lin.F(), SquareMatrix(c * lin.V().m()));
        CHECK(r0_eigen(scaled_f) == doctest::Approx(c * base).epsilon(1e-10));
        CHECK(r0_eigen(scaled_v) == doctest::Approx(base / c).epsilon(1e-10));
    }
}

TEST_CASE("R0 threshold matches the spectral abscissa sign") {
    Rng rng(31337);
    int checked = 0;
    while (checked < 100) {
        const Eigen::Index n = 1 + rng.index(10);
        const LinearizedEpidemic lin = test::random_linearized(rng, n);
        const double r0 = r0_eigen(lin);
        if (std::abs(r0 - 1.0) < 1e-6) continue;
        ++checked;
        const double abscissa =
            spectral_abscissa(SquareMatrix(lin.F().m() + lin.V().m()));
        CHECK((abscissa > 0.0) == (r0 > 1.0));
    }
}
