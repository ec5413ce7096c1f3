#include <benchmark/benchmark.h>

#include <cmath>

#include "movwave/energy.hpp"
#include "movwave/griffith.hpp"
#include "movwave/hyperbolic.hpp"

using namespace movwave;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

const transform::CoefficientField1D& scaling() {
  static const transform::CoefficientField1D c(geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0),
                                               SpaceTimeField::zero());
  return c;
}

void BM_Assemble(benchmark::State& s) {
  const SpectralBasis basis(0.0, 1.0, 32);
  for (auto _ : s) benchmark::DoNotOptimize(hyperbolic::assemble(basis, scaling(), mode(s)));
}

void BM_SolveFd(benchmark::State& s) {
  const hyperbolic::InitialData1D data{[](double y) { return std::sin(M_PI * y); }, {}};
  for (auto _ : s) benchmark::DoNotOptimize(hyperbolic::solve_fd(scaling(), 400, data, 1e-3, 0.5, mode(s)));
}

void BM_Ledger(benchmark::State& s) {
  const auto fam = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  const auto tr = hyperbolic::solve_fd(scaling(), 400, {[](double y) { return std::sin(M_PI * y); }, {}}, 1e-3, 1.0);
  const auto in = energy::ledger_input_1d(fam, tr, SpaceTimeField::zero());
  for (auto _ : s) benchmark::DoNotOptimize(energy::ledger(in, mode(s)));
}

void BM_EquivalenceSweep(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(griffith::equivalence_sweep(1000, 10000, 7, mode(s)));
}

}  // namespace

BENCHMARK(BM_Assemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveFd)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ledger)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EquivalenceSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
