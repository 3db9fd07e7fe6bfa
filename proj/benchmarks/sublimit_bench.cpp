#include <benchmark/benchmark.h>

#include <cmath>

#include "sublimit/projections.hpp"
#include "sublimit/quantum.hpp"
#include "sublimit/recovery.hpp"
#include "sublimit/sampling.hpp"

using namespace sublimit;

namespace {

const Interval kBand(0.0, 2.0);
const Interval kGap(0.0, 0.25);

SampledSignal demo() { return band_project(make_demo_signal(TimeGrid::desk_default()), kBand); }

void BM_ForwardSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TimeGrid grid(-0.5 * static_cast<double>(n) / 64.0, 1.0 / 64.0, n);
  ComplexVector v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = {std::cos(0.1 * static_cast<double>(k)), std::sin(0.37 * static_cast<double>(k))};
  const SampledSignal s(grid, std::move(v));
  for (auto _ : state) benchmark::DoNotOptimize(forward_spectrum(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForwardSpectrum)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_OperatorNorm(benchmark::State& state) {
  const TimeGrid grid = TimeGrid::desk_default();
  const Interval window(0.0, static_cast<double>(state.range(0)) / 64.0);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm_sq(grid, kBand, window).lambda0);
}
BENCHMARK(BM_OperatorNorm)->Arg(4)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_RecoverNeumann(benchmark::State& state) {
  const auto s = demo();
  const auto r = erase(s, {kGap, kBand, std::nullopt});
  for (auto _ : state) benchmark::DoNotOptimize(recover_neumann(r, kBand, kGap).iterations);
}
BENCHMARK(BM_RecoverNeumann)->Unit(benchmark::kMillisecond);

void BM_RecoverBandNeumann(benchmark::State& state) {
  const auto s = demo();
  const auto r = erase(s, {kGap, kBand, std::nullopt});
  for (auto _ : state) benchmark::DoNotOptimize(recover_band_neumann(r, kBand, kGap).iterations);
}
BENCHMARK(BM_RecoverBandNeumann)->Unit(benchmark::kMillisecond);

void BM_RecoverDirect(benchmark::State& state) {
  const auto s = demo();
  const auto r = erase(s, {kGap, kBand, std::nullopt});
  for (auto _ : state) benchmark::DoNotOptimize(recover_direct(r, kBand, kGap).condition_number);
}
BENCHMARK(BM_RecoverDirect)->Unit(benchmark::kMillisecond);

void BM_SpectralCopy(benchmark::State& state) {
  const auto s = demo();
  SpectralCopyConfig cfg;
  cfg.band = kBand;
  cfg.t_sn = cfg.t_ds = 0.25;
  cfg.gate = Interval(0.0, 0.25 - 1.0 / 64.0);
  cfg.comb_origin = 0.125;
  cfg.allow_equal_periods = true;
  cfg.k_max = static_cast<std::size_t>(state.range(0));
  const auto r = complement_gate(s, cfg.gate);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_copy_recover(r, cfg).last_term_norm);
}
BENCHMARK(BM_SpectralCopy)->Arg(0)->Arg(2)->Arg(7);

void BM_Tomography(benchmark::State& state) {
  const TimeGrid box(-2.0, 1.0 / 64.0, 256);
  std::vector<double> p;
  for (int j = -4; j < 4; ++j) p.push_back(j / 4.0);
  const auto rho = build_density(synthesize_state(box, p, random_coefficients(8, 1)), Interval(0.0, 2.0));
  const auto samples = evolve_diagonal_series(rho, tomography_x_points(-2.0, 4.0, 16), tomography_t_points(16));
  for (auto _ : state) benchmark::DoNotOptimize(tomography_solve(samples, p, 1.0, 4.0).residual);
}
BENCHMARK(BM_Tomography)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
