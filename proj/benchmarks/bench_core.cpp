#include <benchmark/benchmark.h>

#include <vector>

#include "jumpcp/bootstrap.hpp"
#include "jumpcp/grids.hpp"
#include "jumpcp/inference.hpp"
#include "jumpcp/levy_distribution.hpp"
#include "jumpcp/rho.hpp"
#include "jumpcp/rng.hpp"
#include "jumpcp/simulate.hpp"
#include "jumpcp/truncation.hpp"
#include "jumpcp/weights.hpp"

namespace {

using namespace jumpcp;

SamplePath bench_path(std::size_t n, double horizon) {
    SimConfig sim;
    sim.n = n;
    sim.horizon = horizon;
    return simulate_path(sim, 12345, 0);
}

IncrementWeights bench_weights(const SamplePath& path) {
    return IncrementWeights::build(path, RhoFunction{}, TruncationSpec{}, level_grid_fine());
}

void BM_simulate_path(benchmark::State& state) {
    SimConfig sim;
    sim.n = static_cast<std::size_t>(state.range(0));
    sim.horizon = static_cast<double>(state.range(1));
    std::uint64_t rep = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_path(sim, 12345, rep++));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_path)->Args({1000, 50})->Args({4000, 100});

void BM_weights_build(benchmark::State& state) {
    const SamplePath path = bench_path(static_cast<std::size_t>(state.range(0)), 100.0);
    const std::vector<double> grid = level_grid_fine();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            IncrementWeights::build(path, RhoFunction{}, TruncationSpec{}, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_weights_build)->Arg(1000)->Arg(4000)->Arg(22500);

void BM_cusum_sup(benchmark::State& state) {
    const SamplePath path = bench_path(static_cast<std::size_t>(state.range(0)), 100.0);
    const IncrementWeights w = bench_weights(path);
    const PrefixField field(w, PrefixField::Kind::plain);
    for (auto _ : state) benchmark::DoNotOptimize(field.cusum_sup());
}
BENCHMARK(BM_cusum_sup)->Arg(4000)->Arg(22500);

void BM_variation_sup(benchmark::State& state) {
    const SamplePath path = bench_path(static_cast<std::size_t>(state.range(0)), 100.0);
    const IncrementWeights w = bench_weights(path);
    const PrefixField field(w, PrefixField::Kind::plain);
    for (auto _ : state) benchmark::DoNotOptimize(field.variation_sup(w.n));
}
BENCHMARK(BM_variation_sup)->Arg(4000)->Arg(22500);

void BM_bootstrap_pass(benchmark::State& state) {
    const SamplePath path = bench_path(static_cast<std::size_t>(state.range(0)), 100.0);
    const IncrementWeights w = bench_weights(path);
    RngStream rng(777);
    std::vector<double> xi(w.n);
    PrefixField field;
    for (auto _ : state) {
        draw_multipliers(std::span<double>(xi), MultiplierKind::gaussian, rng);
        field.assign(w, PrefixField::Kind::plain, xi);
        benchmark::DoNotOptimize(field.cusum_sup());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_bootstrap_pass)->Arg(4000)->Arg(22500);

void BM_weighted_tail_mass(benchmark::State& state) {
    const SqrtStableMeasure measure{1.0, 1e6};
    const RhoFunction rho;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            weighted_tail_mass(measure, rho, WeightPower::squared, 3.0));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_weighted_tail_mass);

void BM_five_step(benchmark::State& state) {
    const SamplePath path = bench_path(4000, 250.0);
    const IncrementWeights w =
        IncrementWeights::build(path, RhoFunction{}, TruncationSpec{}, level_grid_coarse());
    const MultiplierSpec mult{MultiplierKind::gaussian, 200};
    for (auto _ : state) {
        RngStream rng(991);
        benchmark::DoNotOptimize(five_step_gradual(w, FiveStepConfig{}, mult, rng));
    }
}
BENCHMARK(BM_five_step);

}  // namespace

BENCHMARK_MAIN();
