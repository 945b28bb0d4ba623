#include <benchmark/benchmark.h>

#include "nhgwp/engine.hpp"
#include "nhgwp/grid.hpp"

using namespace nhgwp;

namespace {

ModelSpec model_1d(std::vector<double> coeffs, double slope) {
  RealVector m(1), s(1), c(1);
  m << 1.0;
  s << slope;
  c << 1.0;
  return ModelSpec(m, 1.0, PolynomialPotential::from_power_series(std::move(coeffs)), LinearVectorPotential{s, c});
}

WavepacketState packet(std::size_t dim) {
  WavepacketState s;
  s.alpha = ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) * Complex(0.0, 4.0);
  s.q = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  s.p = ComplexVector::Constant(static_cast<Eigen::Index>(dim), Complex(-1.0, 0.0));
  s.gamma = Complex(0.0, unit_norm_gamma_imag(s.alpha));
  return s;
}

void BM_Rhs(benchmark::State& state) {
  const auto model = model_1d({0.0, 0.0, 0.5, 0.0, 0.01}, 0.1);
  const auto s = packet(1);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s, model));
}
BENCHMARK(BM_Rhs);

void BM_StepRk4(benchmark::State& state) {
  const auto model = model_1d({0.0, 0.0, 0.5, 0.0, 0.01}, 0.1);
  auto s = packet(1);
  for (auto _ : state) {
    s = step_rk4(s, model, 1e-6);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StepRk4);

void BM_Propagate10k(benchmark::State& state) {
  const auto model = model_1d({0.0, 0.0, 0.5}, 0.0);
  const auto s = packet(1);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(s, model, 10.0, 1e-3, 10));
}
BENCHMARK(BM_Propagate10k)->Unit(benchmark::kMillisecond);

void BM_SplitStep(benchmark::State& state) {
  const auto model = model_1d({0.0, 0.0, 0.5}, 0.0);
  const Grid1D grid{static_cast<std::size_t>(state.range(0)), 40.0, 0.0};
  auto f = evaluate_wavepacket(packet(1), grid);
  SplitStepOptions opts;
  opts.mask = SpectralMask{};
  opts.tail_tolerance = 1.0;
  for (auto _ : state) {
    f = split_step_constant_b(f, model, 1e-6, 100, opts);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * 100 * state.range(0));  // grid points x steps
}
BENCHMARK(BM_SplitStep)->RangeMultiplier(4)->Range(1024, 16384);

void BM_CrankNicolson(benchmark::State& state) {
  const auto model = model_1d({0.0, 0.0, 0.5}, 0.1);
  const Grid1D grid{static_cast<std::size_t>(state.range(0)), 40.0, 0.0};
  auto f = evaluate_wavepacket(packet(1), grid);
  CrankNicolsonOptions opts;
  opts.boundary_tolerance = 1.0;
  for (auto _ : state) {
    f = crank_nicolson_linear_b(f, model, 1e-6, 100, opts);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * 100 * state.range(0));  // grid points x steps
}
BENCHMARK(BM_CrankNicolson)->RangeMultiplier(4)->Range(1024, 16384);

}  // namespace

BENCHMARK_MAIN();
