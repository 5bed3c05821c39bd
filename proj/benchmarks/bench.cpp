#include <numbers>

#include <benchmark/benchmark.h>

#include "ricciglue/ellipsoid.hpp"
#include "ricciglue/family_glue.hpp"
#include "ricciglue/perelman_glue.hpp"
#include "ricciglue/profile_metrics.hpp"

using namespace ricciglue;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_RicciRoundSphere(benchmark::State& state) {
    const ChartMetricField f =
        round_sphere_field(static_cast<int>(state.range(0))).with_mode(state.range(1) ? DiffMode::finite_difference : DiffMode::analytic);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(f.dim(), 1.1);
    for (auto _ : state) benchmark::DoNotOptimize(ricci_at(f, x));
}
BENCHMARK(BM_RicciRoundSphere)->ArgsProduct({{3, 6}, {0, 1}});

void BM_QuinticCoefficients(benchmark::State& state) {
    double a = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(quintic_coefficients(a, 0.2, 0.3, -a, 0.1, -0.4, 0.01));
        a += 1e-9;
    }
}
BENCHMARK(BM_QuinticCoefficients);

void BM_DoubleCapGlue(benchmark::State& state) {
    const GluePair pair = cap_pair(kPi / 3, 2, 0.5);
    GlueOptions o;
    o.grid_per_unit = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(perelman_glue(pair, 1e-3, o));
}
BENCHMARK(BM_DoubleCapGlue)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_FamilySearch(benchmark::State& state) {
    std::vector<double> b;
    for (int i = 0; i < state.range(0); ++i) b.push_back(static_cast<double>(i) / (state.range(0) - 1));
    const MetricFamily fam = cap_family(kPi / 3, 0.1, b, 2, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(uniform_param_search(fam, 1e-3));
}
BENCHMARK(BM_FamilySearch)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

EllipsoidSpec bench_spec() {
    const Interval S{0.0, 1.2};
    return make_ellipsoid_spec({3, 3, profiles::sine_warp(0.8, S), profiles::sine_warp(0.8, S), profiles::constant(1.0, S),
                                profiles::constant(1.0, S), S, S},
                               1.0, 1.0);
}

void BM_IIProfile(benchmark::State& state) {
    const EllipsoidSpec spec = with_amplitude(bench_spec(), 0.0625);
    const int every = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ii_profile(spec, 101, every));
}
BENCHMARK(BM_IIProfile)->Arg(0)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Collar(benchmark::State& state) {
    const EllipsoidSpec spec = with_amplitude(bench_spec(), 0.0625);
    CollarOptions o;
    o.delta0 = 0.8;
    for (auto _ : state) benchmark::DoNotOptimize(collar_at(spec, 0.7, o));
}
BENCHMARK(BM_Collar)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
