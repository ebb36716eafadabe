#include <benchmark/benchmark.h>

#include <random>

#include "r0gp/allocation.hpp"
#include "r0gp/mobility.hpp"
#include "r0gp/r0.hpp"
#include "r0gp/seir.hpp"

namespace {

using namespace r0gp;

LinearizedEpidemic paper_scale_instance() {
    const MobilityData mob = synth_mobility(58, 7);
    const BaseRates base{0.1, 0.2, 0.1};
    const double alpha = calibrate_alpha(mob, base, mob.populations, 2.5);
    return linearize(make_uniform_seir(mob, base, alpha));
}

LinearizedEpidemic small_instance(Eigen::Index n) {
    std::mt19937_64 engine(12);
    auto unit = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
    Eigen::MatrixXd f(n, n), v(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            f(i, j) = unit();
            if (i != j) {
                v(i, j) = unit();
                row += v(i, j);
            }
        }
        v(i, i) = -(row + 0.5);
    }
    return {SquareMatrix(std::move(f)), SquareMatrix(std::move(v))};
}

void BM_SpectralRadius116(benchmark::State& state) {
    const LinearizedEpidemic lin = paper_scale_instance();
    const SquareMatrix j(lin.F().m() + lin.V().m());
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_radius(j));
    }
}
BENCHMARK(BM_SpectralRadius116);

void BM_R0Eigen116(benchmark::State& state) {
    const LinearizedEpidemic lin = paper_scale_instance();
    for (auto _ : state) {
        benchmark::DoNotOptimize(r0_eigen(lin));
    }
}
BENCHMARK(BM_R0Eigen116);

void BM_R0Bisection(benchmark::State& state) {
    const LinearizedEpidemic lin = small_instance(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(r0_bisection(lin, 1e-9));
    }
}
BENCHMARK(BM_R0Bisection)->Arg(4)->Arg(10);

void BM_R0Gp(benchmark::State& state) {
    const LinearizedEpidemic lin = small_instance(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(r0_gp(lin));
    }
}
BENCHMARK(BM_R0Gp)->Arg(4)->Arg(10);

void BM_BudgetAllocation2Group(benchmark::State& state) {
    const MobilityData mob = synth_mobility(2, 7);
    const BaseRates base{0.1, 0.2, 0.1};
    const double alpha = calibrate_alpha(mob, base, mob.populations, 2.5);
    const SeirModel m = make_uniform_seir(mob, base, alpha);
    const PharmaModel pm = build_pharma_model(m, default_interventions(m), 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_budget_constrained(pm.model(), 0.5));
    }
}
BENCHMARK(BM_BudgetAllocation2Group);

void BM_Simulate5Group(benchmark::State& state) {
    const MobilityData mob = synth_mobility(5, 7);
    const BaseRates base{0.1, 0.2, 0.1};
    const double alpha = calibrate_alpha(mob, base, mob.populations, 2.5);
    const SeirModel m = make_uniform_seir(mob, base, alpha);
    const SeirState init = seeded_init(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate(m, init, {.dt = 0.05, .t_max = 365.0, .record_stride = 1 << 30}));
    }
}
BENCHMARK(BM_Simulate5Group);

}  // namespace

BENCHMARK_MAIN();
