#include <benchmark/benchmark.h>

#include <cmath>

#include "channelwave/channel_norms.hpp"
#include "channelwave/profile_space.hpp"
#include "channelwave/propagator.hpp"
#include "channelwave/radial_wavefield.hpp"

using namespace channelwave;

namespace {

SampledProfile wavy(double h) {
  return SampledProfile::sample([](double s) { return std::exp(-s * s) * std::cos(4.0 * s); },
                                {h, -6.0, static_cast<std::size_t>(12.0 / h) + 1});
}

SampledProfile radial_bump(double h) {
  return SampledProfile::sample(
      [](double r) { return r > 0.5 && r < 2.0 ? std::pow(std::sin(kPi * (r - 0.5) / 1.5), 2) : 0.0; },
      {h, 0.0, static_cast<std::size_t>(3.0 / h) + 1});
}

void BM_hnorm(benchmark::State& state) {
  const auto g = wavy(12.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hnorm(g, SobolevOrder(0.25)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_hnorm)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_free_wave_value(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const RadialFreeWave w(remove_low_moments(wavy(1.0 / 128), d), d);
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w.value(r, 0.7));
    r = r > 3.0 ? 0.1 : r + 0.013;
  }
}
BENCHMARK(BM_free_wave_value)->Arg(3)->Arg(5)->Arg(7);

void BM_half_wave(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const HalfWave u(radial_bump(1.0 / 256), d);
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(u(r, 0.6));
    r = r > 3.0 ? 0.1 : r + 0.013;
  }
}
BENCHMARK(BM_half_wave)->Arg(3)->Arg(5)->Arg(7);

void BM_channel_norm(benchmark::State& state) {
  const RadialFreeWave w(remove_low_moments(wavy(1.0 / 64), 3), 3);
  const RadialField u{[&w](double r, double t) { return w.value(r, t); }};
  for (auto _ : state) benchmark::DoNotOptimize(channel_norm(u, static_cast<int>(state.range(0)), 5.0, 10.0, 3));
}
BENCHMARK(BM_channel_norm)->DenseRange(-2, 2, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
