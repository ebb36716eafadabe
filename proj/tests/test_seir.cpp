#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "r0gp/mobility.hpp"
#include "r0gp/seir.hpp"
#include "testutil.hpp"

using namespace r0gp;
using test::Rng;

namespace {

SeirModel one_group(double beta, double gamma, double delta, double s0, double a11) {
    Eigen::MatrixXd a(1, 1);
    a << a11;
    return SeirModel{Eigen::VectorXd::Constant(1, beta), Eigen::VectorXd::Constant(1, gamma),
                     Eigen::VectorXd::Constant(1, delta), SquareMatrix(std::move(a)),
                     Eigen::VectorXd::Constant(1, s0)};
}

/// Reference calibration point: contact rate chosen so that R0 = 2.5 at
/// beta = 0.1, gamma = 0.2, delta = 0.1.
SeirModel calibrated_one_group(double beta, double gamma, double delta) {
    const double s0 = 1e5;
    const double a11 = 2.5 * 0.1 / (0.1 * s0);  // R0 = beta s0 a / delta
    return one_group(beta, gamma, delta, s0, a11);
}

Eigen::VectorXd seir_rhs_flat(const SeirModel& m, const Eigen::VectorXd& state) {
    const Eigen::Index n = m.groups();
    const auto s = state.segment(0, n), e = state.segment(n, n), z = state.segment(2 * n, n);
    const Eigen::VectorXd force = m.beta.cwiseProduct(s).cwiseProduct(m.contacts.m() * z);
    Eigen::VectorXd d(4 * n);
    d.segment(0, n) = -force;
    d.segment(n, n) = force - m.gamma.cwiseProduct(e);
    d.segment(2 * n, n) = m.gamma.cwiseProduct(e) - m.delta.cwiseProduct(z);
    d.segment(3 * n, n) = m.delta.cwiseProduct(z);
    return d;
}

}  // namespace

TEST_CASE("linearize produces the SEIR block structure") {
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    const LinearizedEpidemic lin = linearize(m);
    CHECK(lin.n() == 2);
    CHECK(lin.F()(0, 1) == doctest::Approx(0.25));  // beta s0 a
    CHECK(lin.F()(0, 0) == 0.0);
    CHECK(lin.V()(0, 0) == doctest::Approx(-0.2));
    CHECK(lin.V()(1, 0) == doctest::Approx(0.2));
    CHECK(lin.V()(1, 1) == doctest::Approx(-0.1));
    CHECK(r0_eigen(lin) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("single-group R0 closed form and gamma invariance") {
    Rng rng(404);
    for (int k = 0; k < 20; ++k) {
        const double beta = rng.uniform(0.02, 0.5);
        const double gamma = rng.uniform(0.05, 0.5);
        const double delta = rng.uniform(0.05, 0.5);
        const double s0 = rng.uniform(1e3, 1e6);
        const double a11 = rng.uniform(1e-7, 1e-4);
        const SeirModel m = one_group(beta, gamma, delta, s0, a11);
        const double r0 = r0_eigen(linearize(m));
        CHECK(r0 == doctest::Approx(beta * s0 * a11 / delta).epsilon(1e-10));

        SeirModel scaled = m;
        scaled.gamma *= rng.uniform(0.2, 5.0);
        CHECK(r0_eigen(linearize(scaled)) == doctest::Approx(r0).epsilon(1e-10));
    }
}

TEST_CASE("disease-free initial state stays constant") {
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    const Trajectory traj = simulate(m, seeded_init(m, 0.0), {.dt = 0.05, .t_max = 10.0});
    CHECK(traj.converged);
    CHECK(traj.peak_infections == 0.0);
    const TrajectoryMetrics metrics = trajectory_metrics(traj);
    CHECK(metrics.peak_infections == 0.0);
    CHECK(metrics.cumulative_infections == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("low-R0 model decays monotonically") {
    const SeirModel m = calibrated_one_group(0.05, 0.2, 0.2);  // R0 = 0.625
    CHECK(r0_eigen(linearize(m)) == doctest::Approx(0.625).epsilon(1e-12));
    const Trajectory traj = simulate(m, seeded_init(m));
    CHECK(traj.converged);
    // No interior peak: infections never exceed the seeding.
    CHECK(traj.peak_time == 0.0);
    const Eigen::Index n = traj.groups;
    const double init_infections = traj.states.front().segment(n, 2 * n).sum();
    CHECK(traj.peak_infections == doctest::Approx(init_infections));
}

TEST_CASE("R0 = 2.5 epidemic peaks and matches a reference integration") {
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    const SeirState init = seeded_init(m, 1e-4);
    const Trajectory traj = simulate(m, init, {.dt = 0.05, .t_max = 400.0});
    CHECK(traj.peak_time > 0.0);
    CHECK(traj.peak_infections > 10.0 * traj.states.front()(1));

    Eigen::VectorXd flat(4);
    flat << init.s(0), init.e(0), init.z(0), init.r(0);
    const Eigen::VectorXd reference = test::rk45_integrate(
        [&](double, const Eigen::VectorXd& y) { return seir_rhs_flat(m, y); }, flat, 0.0, 400.0,
        1e-10);
    const Eigen::VectorXd final_state = traj.final_state;
    for (int i = 0; i < 4; ++i) {
        CHECK(final_state(i) ==
              doctest::Approx(reference(i)).epsilon(1e-6).scale(m.s0.sum()));
    }
}

TEST_CASE("final size of a subcritical epidemic") {
    const SeirModel m = calibrated_one_group(0.05, 0.2, 0.2);  // R0 = 0.625
    const double r0 = 0.625;
    const double e0_frac = 1e-3;
    const SeirState init = seeded_init(m, e0_frac);
    const double e0 = init.e(0);
    const Trajectory traj =
        simulate(m, init, {.dt = 0.05, .t_max = 5000.0, .infection_floor_frac = 1e-10});
    REQUIRE(traj.converged);
    const TrajectoryMetrics metrics = trajectory_metrics(traj);

    // Final-size fixed point: s_inf = s(0) exp(-R0 (s(0) - s_inf + e0) / s0).
    const double s_init = init.s(0), s0 = m.s0(0);
    double s_inf = s_init;
    for (int it = 0; it < 200; ++it) {
        s_inf = s_init * std::exp(-r0 * (s_init - s_inf + e0) / s0);
    }
    const double oracle_cumulative = s0 - s_inf;
    CHECK(metrics.cumulative_infections ==
          doctest::Approx(oracle_cumulative).epsilon(0.01));
    // Geometric-series upper bound on the total ever infected.
    CHECK(metrics.cumulative_infections < e0 * r0 / (1.0 - r0) + e0);
}

TEST_CASE("interior peak exists iff R0 s_init/s0 exceeds one") {
    for (const double target_r0 : {0.3, 0.6, 1.5, 2.5, 4.0}) {
        const SeirModel m = calibrated_one_group(0.1 * target_r0 / 2.5, 0.2, 0.1);
        CHECK(r0_eigen(linearize(m)) == doctest::Approx(target_r0).epsilon(1e-10));
        const SeirState init = seeded_init(m, 1e-4);
        const Trajectory traj = simulate(m, init);
        const bool expected_peak = target_r0 * (init.s(0) / m.s0(0)) > 1.0;
        CHECK((traj.peak_time > 0.0) == expected_peak);
    }
}

TEST_CASE("conservation and non-negativity on random models") {
    Rng rng(8080);
    for (int k = 0; k < 5; ++k) {
        const Eigen::Index n = 1 + rng.index(4);
        const MobilityData mob = synth_mobility(n, 1000 + k);
        const BaseRates base{0.1, 0.2, 0.1};
        const double alpha = calibrate_alpha(mob, base, mob.populations, rng.uniform(0.5, 4.0));
        SeirModel m = make_uniform_seir(mob, base, alpha);
        m.beta *= rng.uniform(0.5, 2.0);
        const Trajectory traj = simulate(m, seeded_init(m), {.dt = 0.05, .t_max = 600.0});
        CHECK(traj.max_conservation_error <= 1e-6);
        const double floor = -1e-9 * traj.total_population;
        for (const auto& state : traj.states) {
            CHECK(state.minCoeff() >= floor);
        }
    }
}

TEST_CASE("early growth rate matches the spectral abscissa") {
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    const LinearizedEpidemic lin = linearize(m);
    const double abscissa = spectral_abscissa(SquareMatrix(lin.F().m() + lin.V().m()));
    REQUIRE(abscissa > 0.0);

    const SeirState init = seeded_init(m, 1e-8);
    const Trajectory traj = simulate(m, init, {.dt = 0.05, .t_max = 1000.0});
    const Eigen::Index n = traj.groups;
    const double i0 = traj.states.front().segment(n, 2 * n).sum();
    double t1 = -1.0, i1 = 0.0, t2 = -1.0, i2 = 0.0;
    for (size_t k = 0; k < traj.times.size(); ++k) {
        const double infections = traj.states[k].segment(n, 2 * n).sum();
        if (t1 < 0.0 && infections >= 100.0 * i0) {
            t1 = traj.times[k];
            i1 = infections;
        }
        if (t2 < 0.0 && infections >= 1e4 * i0) {
            t2 = traj.times[k];
            i2 = infections;
            break;
        }
    }
    REQUIRE(t2 > t1);
    const double fitted = std::log(i2 / i1) / (t2 - t1);
    CHECK(std::abs(fitted - abscissa) <= 0.05 * abscissa);
}

TEST_CASE("simulate rejects bad inputs and unstable steps") {
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    SeirState init = seeded_init(m);
    SUBCASE("negative initial state") {
        init.e(0) = -1.0;
        CHECK_THROWS_AS(simulate(m, init), InputError);
    }
    SUBCASE("oversized step is diagnosed") {
        SeirModel stiff = m;
        stiff.gamma.setConstant(49.0);
        stiff.delta.setConstant(50.0);
        // Explicit RK4 is unstable at dt * rate = 50; the negativity guard
        // should fire with a step-size hint rather than returning garbage.
        CHECK_THROWS_AS(
            simulate(stiff, seeded_init(stiff, 0.2), {.dt = 1.0, .t_max = 50.0}),
            SolverError);
    }
}

TEST_CASE("trajectory CSV export") {
    namespace fs = std::filesystem;
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    const Trajectory traj =
        simulate(m, seeded_init(m), {.dt = 0.05, .t_max = 2.0, .record_stride = 4});
    const fs::path path = fs::temp_directory_path() / "r0gp_traj.csv";
    write_trajectory_csv(path, traj);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,s[0],e[0],z[0],r[0]");
    size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == traj.times.size());
}

TEST_CASE("validate_assumptions accepts the SEIR fields") {
    const MobilityData mob = synth_mobility(3, 99);
    const BaseRates base{0.1, 0.2, 0.1};
    const double alpha = calibrate_alpha(mob, base, mob.populations, 2.5);
    const SeirModel m = make_uniform_seir(mob, base, alpha);
    const CompartmentalFields fields = seir_fields(m);

    Rng rng(11);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd x(6), y(6);
        for (int i = 0; i < 6; ++i) {
            x(i) = rng.uniform(0.0, 1e4);
            y(i) = rng.uniform(0.0, 1e5);
        }
        samples.emplace_back(x, y);
    }
    Eigen::VectorXd y_star(6);
    y_star << m.s0, Eigen::VectorXd::Zero(3);
    const AssumptionReport report = validate_assumptions(fields, samples, y_star);
    CHECK(report.new_infections_nonneg.pass);
    CHECK(report.zero_when_disease_free.pass);
    CHECK(report.no_outflow_from_empty_infected.pass);
    CHECK(report.no_outflow_from_empty_noninfected.pass);
    CHECK(report.regularity_pass());
    // The SEIR disease-free equilibrium is only marginally stable: the
    // susceptible/recovered directions carry zero eigenvalues.
    CHECK(report.has_equilibrium_check);
    CHECK(std::abs(report.equilibrium_abscissa) <= 1e-5);
    CHECK_FALSE(report.equilibrium_hurwitz);
}

TEST_CASE("validate_assumptions catches a sign error in new infections") {
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    CompartmentalFields fields = seir_fields(m);
    const auto good = fields.new_infections;
    fields.new_infections = [good](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return Eigen::VectorXd(-good(x, y));
    };
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
    Eigen::VectorXd x(2), y(2);
    x << 10.0, 20.0;
    y << 1e4, 0.0;
    samples.emplace_back(x, y);
    const AssumptionReport report = validate_assumptions(fields, samples);
    CHECK_FALSE(report.new_infections_nonneg.pass);
    CHECK_FALSE(report.new_infections_nonneg.detail.empty());
    CHECK(report.zero_when_disease_free.pass);  // -f still vanishes at x = 0
}

TEST_CASE("v-field vanishes identically at the disease-free state") {
    const SeirModel m = calibrated_one_group(0.1, 0.2, 0.1);
    const CompartmentalFields fields = seir_fields(m);
    Rng rng(21);
    for (int k = 0; k < 50; ++k) {
        Eigen::VectorXd y(2);
        y << rng.uniform(0.0, 1e5), rng.uniform(0.0, 1e5);
        CHECK(fields.transitions(Eigen::VectorXd::Zero(2), y).cwiseAbs().maxCoeff() == 0.0);
    }
}
