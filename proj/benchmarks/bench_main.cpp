#include <benchmark/benchmark.h>

#include "xyzbethe/bae_solver.hpp"
#include "xyzbethe/expr.hpp"
#include "xyzbethe/lattice_model.hpp"

using namespace xyzbethe;

namespace {

ModelParams params(int n) {
  ModelParams p;
  p.n_sites = n;
  p.tau = {0.4, 0.6};
  p.eta = parse_complex("1/e+i*pi/10");
  return p;
}

void BM_Theta(benchmark::State& state) {
  const EllipticContext ctx({0.0, 0.6});
  cplx u{0.13, 0.07};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ell(1, u, ctx));
    u += 1e-9;
  }
}
BENCHMARK(BM_Theta);

void BM_BaeResidual(benchmark::State& state) {
  const XyzModel model(params(4));
  const std::vector<cplx> roots{{0.1, 0.05}, {-0.2, 0.11}};
  for (auto _ : state) benchmark::DoNotOptimize(bae_residual(roots, 0, model));
}
BENCHMARK(BM_BaeResidual);

void BM_MultiStart(benchmark::State& state) {
  const ModelParams p = params(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(multi_start_solve(p, SolverConfig{}));
}
BENCHMARK(BM_MultiStart)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExactSpectrum(benchmark::State& state) {
  const ModelParams p = params(static_cast<int>(state.range(0)));
  const auto probes = default_lambda_probes();
  for (auto _ : state) benchmark::DoNotOptimize(exact_spectrum(p, probes));
}
BENCHMARK(BM_ExactSpectrum)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
