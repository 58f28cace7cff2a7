#include <benchmark/benchmark.h>

#include "skelet17/accel.hpp"
#include "skelet17/epoch.hpp"
#include "skelet17/machine.hpp"

namespace {

using namespace skelet17;

void BM_GrayDecode(benchmark::State& state) {
  std::vector<std::uint8_t> digits(17);
  for (auto _ : state) {
    for (Int n = 0; n < 1024; ++n) {
      for (int i = 1; i <= 17; ++i) {
        digits[static_cast<std::size_t>(i - 1)] =
            static_cast<std::uint8_t>(gray_digit(n, i));
      }
      benchmark::DoNotOptimize(gray_decode(digits));
    }
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_GrayDecode);

void BM_TransitStepped(benchmark::State& state) {
  const State e = State::parse("2,2,6,8,18,0");
  for (auto _ : state) {
    benchmark::DoNotOptimize(next_empty(e, {.batched = false}));
  }
}
BENCHMARK(BM_TransitStepped);

void BM_TransitBatched(benchmark::State& state) {
  const State e = State::parse("2,2,6,8,18,0");
  for (auto _ : state) {
    benchmark::DoNotOptimize(next_empty(e, {.batched = true}));
  }
}
BENCHMARK(BM_TransitBatched);

void BM_NprimeSweep(benchmark::State& state) {
  // One full cursor sweep from the seed to the out-of-bounds boundary.
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RootedCursor c = seed_cursor(k);
    while (weak_bounds(c.state)) c = nprime_step(c, /*check=*/false);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_NprimeSweep)->Arg(2)->Arg(4)->Arg(6);

void BM_RunEpoch(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Tier tier = state.range(1) == 3 ? Tier::kT3 : Tier::kT2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_epoch(k, tier, /*check=*/false));
  }
}
BENCHMARK(BM_RunEpoch)->Args({4, 2})->Args({4, 3})->Args({8, 3});

}  // namespace

BENCHMARK_MAIN();
