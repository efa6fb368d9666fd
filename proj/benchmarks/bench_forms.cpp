#include <benchmark/benchmark.h>

#include <cmath>

#include "fermistab/mellin.hpp"
#include "fermistab/monte_carlo.hpp"
#include "fermistab/nbody.hpp"
#include "fermistab/partial_wave.hpp"
#include "fermistab/stability.hpp"
#include "fermistab/trials.hpp"

namespace {

using namespace fermistab;

RadialFunction gauss_charge() {
  return RadialFunction::from_function(LogGrid(-12.0, 6.0, 4096),
                                       [](double p) { return p * std::exp(-p * p); });
}

void BM_s_kernel(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  double k = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s_kernel(l, k, 1.0, 2));
    k = std::fmod(k + 0.37, 20.0);
  }
}
BENCHMARK(BM_s_kernel)->Arg(0)->Arg(1)->Arg(5)->Arg(9);

void BM_g_off_direct(benchmark::State& state) {
  const RadialFunction g = gauss_charge();
  GOffOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(g_off(g, 1, 0.5, 1.0, 2, opts));
}
BENCHMARK(BM_g_off_direct);

void BM_g_off_series(benchmark::State& state) {
  const RadialFunction g = gauss_charge();
  GOffOptions opts;
  opts.method = OffMethod::Series;
  for (auto _ : state) benchmark::DoNotOptimize(g_off(g, 1, 0.5, 1.0, 2, opts));
}
BENCHMARK(BM_g_off_series);

void BM_g_off_mellin(benchmark::State& state) {
  const RadialFunction g = gauss_charge();
  GOffOptions opts;
  opts.method = OffMethod::Mellin;
  for (auto _ : state) benchmark::DoNotOptimize(g_off(g, 1, 0.0, 1.0, 2, opts));
}
BENCHMARK(BM_g_off_mellin);

void BM_mellin_sharp(benchmark::State& state) {
  const RadialFunction g = gauss_charge();
  const MellinTransform mt(g);
  double k = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mt(k));
    k = std::fmod(k + 0.61, 40.0);
  }
}
BENCHMARK(BM_mellin_sharp);

void BM_critical_mass(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(critical_mass(2));
}
BENCHMARK(BM_critical_mass);

void BM_slater_eval(benchmark::State& state) {
  TrialParams p;
  p.n = 4.0;
  p.gamma = 0.25;
  p.beta = 1.0 / 16.0;
  const SlaterCharge xi = slater_charge(p, 3);
  const Vec3 ks[2] = {{0.0, 0.0, 400.0}, {0.01, 0.02, 0.03}};
  for (auto _ : state) benchmark::DoNotOptimize(xi.evaluate(std::span<const Vec3>(ks, 2)));
}
BENCHMARK(BM_slater_eval);

void BM_phi_slater_mc(benchmark::State& state) {
  TrialParams p;
  p.n = 4.0;
  p.gamma = 0.25;
  p.beta = 1.0 / 16.0;
  const SlaterCharge xi = slater_charge(p, 3);
  SystemParams sys;
  sys.m = 0.05;
  sys.n_fermions = 3;
  for (auto _ : state)
    benchmark::DoNotOptimize(phi_slater_mc(xi, sys, state.range(0), 0));
}
BENCHMARK(BM_phi_slater_mc)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
