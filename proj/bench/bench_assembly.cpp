#include <benchmark/benchmark.h>

#include "zvem/assemble.hpp"
#include "zvem/mms.hpp"

namespace {

void assemble(benchmark::State& state, zvem::Execution exec) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const zvem::PolygonalMesh mesh = zvem::generate_hexagonal(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(zvem::assemble_global(mesh, k, zvem::MaterialParams::standard(), exec));
  }
  state.counters["cells"] = static_cast<double>(mesh.num_cells());
}

void errors(benchmark::State& state, zvem::Execution exec) {
  const int n = static_cast<int>(state.range(0));
  const zvem::PolygonalMesh mesh = zvem::generate_cartesian(n);
  const zvem::ManufacturedCase mc = zvem::build_case("poly-t2", zvem::MaterialParams::standard());
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(zvem::DofLayout(mesh, 1).total());
  for (auto _ : state) {
    benchmark::DoNotOptimize(zvem::error_norms(mesh, 1, x, mc, 1.0, exec));
  }
}

void BM_AssembleSerial(benchmark::State& s) { assemble(s, zvem::Execution::Serial); }
void BM_AssembleParallel(benchmark::State& s) { assemble(s, zvem::Execution::Parallel); }
void BM_ErrorsSerial(benchmark::State& s) { errors(s, zvem::Execution::Serial); }
void BM_ErrorsParallel(benchmark::State& s) { errors(s, zvem::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_AssembleSerial)->ArgsProduct({{8, 16, 32}, {1, 2}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AssembleParallel)->ArgsProduct({{8, 16, 32}, {1, 2}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ErrorsSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ErrorsParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
