// Microbenchmarks for the hot paths: book maintenance, the two simulation
// loops, sign-flow generation and the FFT-backed statistics. Build with
// -DALOB_BUILD_BENCHMARKS=ON and run benchmarks/alob_bench.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "alob/analytics.hpp"
#include "alob/book.hpp"
#include "alob/dar.hpp"
#include "alob/flow.hpp"
#include "alob/rng.hpp"
#include "alob/sim.hpp"

using namespace alob;

namespace {

book::OrderBook stationary_book(rng::Xoshiro256pp& gen) {
    book::BookParams p;
    p.half_width = 500;
    // Mean depth lambda/nu = 50 lots per tick, the stationary level of the
    // default simulation configuration.
    return book::OrderBook::seeded(p, 10'000, 50.0, gen);
}

void BM_BookCancelPass(benchmark::State& state) {
    rng::Xoshiro256pp gen(1, "bench");
    auto b = stationary_book(gen);
    for (auto _ : state) {
        b.cancel_pass(0.01, gen);
        // Keep the depth from draining over long runs.
        if (b.total_shares(book::Side::Bid) < 1'000'000) {
            state.PauseTiming();
            b = stationary_book(gen);
            state.ResumeTiming();
        }
    }
}
BENCHMARK(BM_BookCancelPass);

void BM_BookPlaceLimit(benchmark::State& state) {
    rng::Xoshiro256pp gen(2, "bench");
    auto b = stationary_book(gen);
    for (auto _ : state) {
        const auto side = (gen.next_u64() & 1u) ? book::Side::Bid : book::Side::Ask;
        const auto r = b.placement_range(side);
        const auto q = r.lo + static_cast<std::int64_t>(
                                  gen.next_below(static_cast<std::uint64_t>(r.ticks)));
        b.place_limit(side, q);
    }
}
BENCHMARK(BM_BookPlaceLimit);

void BM_BookExecuteAndRefill(benchmark::State& state) {
    rng::Xoshiro256pp gen(3, "bench");
    auto b = stationary_book(gen);
    int sign = 1;
    for (auto _ : state) {
        // One lot out, one lot back: depth is exactly stationary.
        const auto rep = b.execute_market(sign, 100);
        b.deposit(sign > 0 ? book::Side::Ask : book::Side::Bid, rep.opposite_best_before);
        sign = -sign;
    }
}
BENCHMARK(BM_BookExecuteAndRefill);

void BM_SimRunFullModel(benchmark::State& state) {
    sim::SimConfig cfg;
    cfg.n_trades = 2000;
    cfg.base_price = 10'000;
    cfg.seed = 4;
    std::int64_t trades = 0;
    for (auto _ : state) {
        const auto res = sim::run(cfg);
        benchmark::DoNotOptimize(res.log.size());
        trades += cfg.n_trades;
    }
    state.counters["trades/s"] =
        benchmark::Counter(static_cast<double>(trades), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimRunFullModel)->Unit(benchmark::kMillisecond);

void BM_SimRunReduced(benchmark::State& state) {
    sim::ReducedConfig cfg;
    cfg.n_trades = 100'000;
    cfg.seed = 5;
    cfg.dar.chi = 0.5;
    cfg.dar.phi = {0.6, 0.4};
    std::int64_t trades = 0;
    for (auto _ : state) {
        const auto res = sim::run_reduced(cfg);
        benchmark::DoNotOptimize(res.log_price.size());
        trades += cfg.n_trades;
    }
    state.counters["trades/s"] =
        benchmark::Counter(static_cast<double>(trades), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimRunReduced)->Unit(benchmark::kMillisecond);

void BM_DarGenerate(benchmark::State& state) {
    flow::DarParams params;
    params.chi = 0.5;
    params.phi.assign(10, 0.1);
    for (auto _ : state) {
        const auto s = flow::gen_dar(params, 100'000, rng::Xoshiro256pp(6, "bench"));
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_DarGenerate)->Unit(benchmark::kMillisecond);

void BM_DarPredict(benchmark::State& state) {
    flow::DarParams params;
    params.chi = 0.5;
    params.phi.assign(50, 0.02);
    const auto hist = flow::gen_dar(params, 50, rng::Xoshiro256pp(7, "bench"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dar::predict(params, hist));
    }
}
BENCHMARK(BM_DarPredict);

void BM_LmfGenerate(benchmark::State& state) {
    flow::LmfParams params;
    params.participation = 0.6;
    flow::LmfGenerator gen(params, rng::Xoshiro256pp(8, "bench"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gen.next().sign);
    }
}
BENCHMARK(BM_LmfGenerate);

void BM_SignaturePlot(benchmark::State& state) {
    rng::Xoshiro256pp gen(9, "bench");
    std::vector<double> price(1'000'000);
    double p = 0.0;
    for (auto& v : price) v = (p += 1e-4 * gen.next_normal());
    const auto lags = analytics::log_spaced_lags(1000);
    for (auto _ : state) {
        const auto plot = analytics::signature_plot(price, lags);
        benchmark::DoNotOptimize(plot.sigma.data());
    }
}
BENCHMARK(BM_SignaturePlot)->Unit(benchmark::kMillisecond);

void BM_SampleAutocorrelation(benchmark::State& state) {
    flow::DarParams params;
    params.chi = 0.5;
    params.phi = {0.6, 0.4};
    const auto s = flow::gen_dar(params, 1'000'000, rng::Xoshiro256pp(10, "bench"));
    for (auto _ : state) {
        const auto acf = dar::sample_autocorrelation(s, 1000);
        benchmark::DoNotOptimize(acf.data());
    }
}
BENCHMARK(BM_SampleAutocorrelation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
