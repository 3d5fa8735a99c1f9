#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "msfc/emd.hpp"

namespace {

std::vector<double> oily_signal(std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double x = static_cast<double>(t);
    s[t] = 30.0 + 0.1 * x + 8.0 * std::sin(2 * std::numbers::pi * x / 52.0) +
           3.0 * std::sin(2 * std::numbers::pi * x / 9.0) +
           1.5 * std::sin(2 * std::numbers::pi * x / 3.1);
  }
  return s;
}

}  // namespace

static void BM_Decompose(benchmark::State& state) {
  const auto s = oily_signal(static_cast<std::size_t>(state.range(0)));
  msfc::emd::SiftConfig cfg;
  for (auto _ : state) {
    auto dec = msfc::emd::decompose(s, cfg);
    benchmark::DoNotOptimize(dec);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Decompose)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

static void BM_SiftOnce(benchmark::State& state) {
  const auto s = oily_signal(626);
  msfc::emd::SiftConfig cfg;
  for (auto _ : state) {
    auto imf = msfc::emd::sift(s, cfg);
    benchmark::DoNotOptimize(imf);
  }
}
BENCHMARK(BM_SiftOnce);

BENCHMARK_MAIN();
