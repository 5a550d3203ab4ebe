#include <benchmark/benchmark.h>

#include "edgetilt/bounds.hpp"
#include "edgetilt/cf.hpp"
#include "edgetilt/exact_dist.hpp"

using namespace edgetilt;

namespace {

const Die& y_die() {
  static const Die d = parse_die("(9z^-8+1+8z^9)/18");
  return d;
}

void BM_ConvolutionSteps(benchmark::State& state) {
  const auto steps = state.range(0);
  for (auto _ : state) {
    SumConvolver conv(y_die());
    for (std::int64_t i = 1; i < steps; ++i) conv.step();
    benchmark::DoNotOptimize(conv.side_counts());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_ConvolutionSteps)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_CfScan(benchmark::State& state) {
  const NormalizedCf f(y_die());
  const double delta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    double worst = 0.0;
    f.scan_cells(0.1, 3.14159, delta, [&](double, double, double upper) {
      worst = std::max(worst, upper);
    });
    benchmark::DoNotOptimize(worst);
  }
}
BENCHMARK(BM_CfScan)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PeakProfile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(peak_profile(y_die()));
}
BENCHMARK(BM_PeakProfile)->Unit(benchmark::kMillisecond);

void BM_N2Search(benchmark::State& state) {
  const DieSummary s = summarize(y_die());
  const GlobalConstants gc = global_constants(s);
  const ClassConstants cc = class_constants(s, 0);
  const TailBound tail = *TailBound::make(s, gc, static_cast<TailMode>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(n2(gc, cc, tail));
}
BENCHMARK(BM_N2Search)
    ->Arg(static_cast<int>(TailMode::kCert))
    ->Arg(static_cast<int>(TailMode::kOptimal))
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
