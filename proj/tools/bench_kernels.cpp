// Microbenchmarks for the two correlation routes and the OpenMP-parallel
// simulate/estimate kernels against their single-thread baselines.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "ccdas/channel.hpp"
#include "ccdas/codes.hpp"
#include "ccdas/correlation.hpp"
#include "ccdas/modulation.hpp"
#include "ccdas/receiver.hpp"
#include "ccdas/rng.hpp"

namespace {

using namespace ccdas;

cvec random_cvec(int n, std::uint64_t seed) {
  const CounterRng rng(seed, 7);
  cvec v(n);
  for (int i = 0; i < n; ++i) {
    const auto [re, im] = rng.gaussian_pair(i);
    v[i] = {re, im};
  }
  return v;
}

void BM_PeriodicCorrelateDirect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cvec a = random_cvec(n, 1), b = random_cvec(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(periodic_correlate_direct(a, b));
}
BENCHMARK(BM_PeriodicCorrelateDirect)->Arg(64)->Arg(256)->Arg(1024)->Arg(4096);

void BM_PeriodicCorrelateFft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cvec a = random_cvec(n, 1), b = random_cvec(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(periodic_correlate_fft(a, b));
}
BENCHMARK(BM_PeriodicCorrelateFft)->Arg(64)->Arg(256)->Arg(1024)->Arg(4096)->Arg(16384);

struct Scene {
  ProbeFrame frame;
  SensorArrayConfig array;
  LaserConfig laser;
  std::vector<int> delays;

  explicit Scene(int n_g)
      : frame(build_pdm_qpsk_frame(generate_golay_set(n_g), 160e6)) {
    laser.rx_noise_sigma = 0.1;
    TapSet taps = build_tap_set(frame, array, laser, 1);
    delays = taps.delays();
  }
};

// One frame of the production estimator: four correlations sampled at the
// tap delays only.
void BM_EstimateFrameSampled(benchmark::State& state) {
  Scene sc(static_cast<int>(state.range(0)));
  const IQCapture cap =
      propagate(sc.frame, sc.array, sc.laser, 2 * sc.frame.period_seconds(), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_frame(cap.e_rx.data(), cap.e_ry.data(),
                                            sc.frame, sc.delays, 0));
}
BENCHMARK(BM_EstimateFrameSampled)->Arg(1024)->Arg(4096)->Arg(16384);

// Same estimate via full FFT correlation profiles.
void BM_EstimateFrameFull(benchmark::State& state) {
  Scene sc(static_cast<int>(state.range(0)));
  const IQCapture cap =
      propagate(sc.frame, sc.array, sc.laser, 2 * sc.frame.period_seconds(), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_jones_fft(cap, sc.frame, sc.delays));
}
BENCHMARK(BM_EstimateFrameFull)->Arg(1024)->Arg(4096)->Arg(16384);

// Sample synthesis with a varying OpenMP thread count.
void BM_SimulateBlock(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  Scene sc(4096);
  Simulator sim(sc.frame, sc.array, sc.laser, 1);
  std::vector<std::complex<double>> rx(16 * sc.frame.length()), ry(rx.size());
  for (auto _ : state) sim.generate(rx.size(), rx.data(), ry.data());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rx.size()));
}
BENCHMARK(BM_SimulateBlock)->Arg(1)->Arg(2)->Arg(4);

// Whole-capture estimation (frame-parallel) with a varying thread count.
void BM_EstimateCapture(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  Scene sc(4096);
  const IQCapture cap =
      propagate(sc.frame, sc.array, sc.laser, 16 * sc.frame.period_seconds(), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_jones(cap, sc.frame, sc.delays));
}
BENCHMARK(BM_EstimateCapture)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
