#include <benchmark/benchmark.h>

#include <cmath>

#include "qhd/fractional.hpp"
#include "qhd/polar.hpp"
#include "qhd/spectral.hpp"

namespace {

using namespace qhd;

WaveState packet(int dim, std::size_t n) {
  const double L = 20.0;
  const Grid g = make_grid(dim, n, L);
  WaveState s{ComplexField(g), 0.0, 1.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unravel(i);
    double r2 = 0.0;
    double x0 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double x = g.coordinate(a, idx[static_cast<std::size_t>(a)]) - 0.5 * L;
      r2 += x * x;
      x0 += x;
    }
    s.psi[i] = std::polar(std::exp(-r2 / 4.0), 0.3 * std::sin(x0 / 3.0));
  }
  return s;
}

int dim_of(const benchmark::State& st) { return static_cast<int>(st.range(0)); }
std::size_t points_of(const benchmark::State& st) { return static_cast<std::size_t>(st.range(1)); }

void Transforms(benchmark::State& st) {
  const WaveState s = packet(dim_of(st), points_of(st));
  for (auto _ : st) benchmark::DoNotOptimize(inverse(forward(s.psi)));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.psi.size()));
}

void StrangStep(benchmark::State& st) {
  WaveState s = packet(dim_of(st), points_of(st));
  PhysicsParams pp;
  pp.p = 3;
  StrangStepper stepper(s.grid(), 1e-3, pp);
  for (auto _ : st) stepper.step(s);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.psi.size()));
}

void HydroDecomposition(benchmark::State& st) {
  const WaveState s = packet(dim_of(st), points_of(st));
  for (auto _ : st) benchmark::DoNotOptimize(hydrodynamic_fields(s));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.psi.size()));
}

void PhaseUpdate(benchmark::State& st) {
  const WaveState s = packet(dim_of(st), points_of(st));
  for (auto _ : st) benchmark::DoNotOptimize(phase_damping_update(s, 0.05, std::nullopt, BranchPolicy::adaptive));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.psi.size()));
}

void Sizes(benchmark::internal::Benchmark* b) {
  b->Args({1, 256})->Args({1, 4096})->Args({2, 64})->Args({2, 256})->Args({3, 32});
}

}  // namespace

BENCHMARK(Transforms)->Apply(Sizes);
BENCHMARK(StrangStep)->Apply(Sizes);
BENCHMARK(HydroDecomposition)->Apply(Sizes);
BENCHMARK(PhaseUpdate)->Apply(Sizes);
BENCHMARK_MAIN();
