// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cstdint>

#include "leoroute/analytics.hpp"
#include "leoroute/montecarlo.hpp"

using namespace leoroute;

namespace {

const SystemParams& params() {
  static SystemParams p = [] {
    SystemParams q;
    q.eps = 0.15;
    return q;
  }();
  return p;
}

void SrFadingCdf(benchmark::State& state) {
  const auto& p = params();
  double w = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(channel::sr_fading_cdf(w, p.chan));
    w = w < 8.0 ? w + 0.01 : 0.1;
  }
}
BENCHMARK(SrFadingCdf);

void SrFadingSample(benchmark::State& state) {
  const auto& p = params();
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(channel::sample_sr_fading(rng, p.chan));
}
BENCHMARK(SrFadingSample);

void PointingGainSample(benchmark::State& state) {
  const auto& p = params();
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(channel::sample_pointing_gain(rng, p.chan));
}
BENCHMARK(PointingGainSample);

void NearestPoint(benchmark::State& state) {
  Rng rng(3);
  const auto set = geometry::sample_bpp((std::size_t)state.range(0), 7371.0,
                                        geometry::DeviceKind::satellite, rng);
  const geometry::SphericalPoint target(7371.0, 0.4, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(geometry::nearest_point(set, target));
}
BENCHMARK(NearestPoint)->Arg(1000)->Arg(10000);

// Distinct angles defeat the memo cache, so this measures the quadrature.
void Alpha1Quadrature(benchmark::State& state) {
  const auto ctx = scaling::make_context(params());
  std::int64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaling::alpha1(0.2 + 1e-9 * (double)i++, ctx));
  }
}
BENCHMARK(Alpha1Quadrature);

void SingleHopAvailability(benchmark::State& state) {
  std::int64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        analytics::single_hop_availability(0.41, 0.41, 0.45 + 1e-9 * (double)(i++ % 1000), 1000,
                                           7371.0));
  }
}
BENCHMARK(SingleHopAvailability);

void ContactAngleDensity(benchmark::State& state) {
  const auto ctx = scaling::make_context(params());
  scaling::alpha1(0.3, ctx);  // warm the cache the density relies on
  double t = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::angle_pdf_c1(t, 0.3, ctx));
    t = t < 0.6 ? t + 0.001 : 0.05;
  }
}
BENCHMARK(ContactAngleDensity);

void TrialBatch(benchmark::State& state) {
  mc::TrialConfig cfg;
  cfg.params = params();
  cfg.trials = state.range(0);
  cfg.seed = 42;
  cfg.kind = planner::RouteKind::isr;
  cfg.workers = 1;
  mc::run_trials(cfg);  // hoist the one-off planning cost out of the loop
  for (auto _ : state) benchmark::DoNotOptimize(mc::run_trials(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(TrialBatch)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
