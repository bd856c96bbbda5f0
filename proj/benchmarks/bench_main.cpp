#include <gfmm/estimator.hpp>
#include <gfmm/filter.hpp>
#include <gfmm/lambert_w.hpp>
#include <gfmm/schedule.hpp>
#include <gfmm/simulator.hpp>
#include <gfmm/spectral.hpp>
#include <gfmm/statistics.hpp>
#include <gfmm/transform.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace gfmm;

// Direct MA path, 10^4 terms.
static void BM_SimulateDirect(benchmark::State& state) {
    const GegenbauerSpec spec{0.1, 0.3, 1.0, 10000};
    const auto coeffs = gegenbauer_coeffs(spec, spec.n_terms - 1);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(spec, coeffs, n, ++seed));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateDirect)->Arg(10000)->Unit(benchmark::kMillisecond);

// FFT overlap-save path.
static void BM_SimulateFft(benchmark::State& state) {
    const GegenbauerSpec spec{0.1, 0.3, 1.0, static_cast<std::size_t>(state.range(1))};
    const auto coeffs = gegenbauer_coeffs(spec, spec.n_terms - 1);
    SimulateOptions opts;
    opts.direct_max_terms = 1024;
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(spec, coeffs, n, ++seed, opts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateFft)->Args({10000, 10000})->Args({100000, 100000})->Unit(benchmark::kMillisecond);

static void BM_DiscreteTransform(benchmark::State& state) {
    const auto filter = mexican_hat(1.0);
    const double a = static_cast<double>(state.range(0));
    const TransformRequest req{a, 0.0, 50.0 * a, 0.05};
    const auto x = simulate(GegenbauerSpec{0.1, 0.3, 1.0, 2000}, req.cell_count(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(discrete_transform(x.view(), filter, req));
}
BENCHMARK(BM_DiscreteTransform)->Arg(2)->Arg(8);

static void BM_FirstStatistic(benchmark::State& state) {
    ScheduleOverrides o;
    o.m_cap = 64;
    o.theta_scale = 200;
    o.window = 10000;
    const auto sched = build_schedule("desk", 6, o);
    const auto x = simulate(GegenbauerSpec{0.1, 0.3, 1.0, 10000}, 10000, 2);
    const auto filter = mexican_hat(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(first_statistic(x, filter, sched, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FirstStatistic)->Arg(2)->Arg(5);

static void BM_LambertW(benchmark::State& state) {
    std::vector<double> xs;
    for (int i = 0; i < 1024; ++i) xs.push_back(-0.36 + std::pow(1e6, i / 1023.0));
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(lambert_w0(xs[k++ & 1023]));
}
BENCHMARK(BM_LambertW);

static void BM_Invert(benchmark::State& state) {
    const auto y = moment_map(1.27, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(invert(y));
}
BENCHMARK(BM_Invert);

static void BM_SpectralSecondMoment(benchmark::State& state) {
    const SpectralModel model(std::acos(0.3), 0.1);
    const auto filter = mexican_hat(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_second_moment(4.0, model, filter));
}
BENCHMARK(BM_SpectralSecondMoment)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
