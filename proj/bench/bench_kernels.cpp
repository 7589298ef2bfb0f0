// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "slabxrt/kernel.hpp"
#include "slabxrt/xray.hpp"

using namespace slabxrt;

namespace {

const std::vector<double> kB{0.37, -1.21};

void BM_XraySinogram(benchmark::State& state) {
  const auto f = random_field(2, 2, 4, 4, 1);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(xray_sinogram(f, kB, grid));
  state.SetItemsProcessed(state.iterations() * grid * grid);
}

void BM_XraySinogramSerial(benchmark::State& state) {
  const auto f = random_field(2, 2, 4, 4, 1);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(xray_sinogram_serial(f, kB, grid));
  state.SetItemsProcessed(state.iterations() * grid * grid);
}

void BM_QuadratureSinogram(benchmark::State& state) {
  const auto f = random_field(2, 2, 3, 3, 2);
  const int grid = static_cast<int>(state.range(0));
  const int nodes = default_quadrature_nodes(f, kB);
  for (auto _ : state) benchmark::DoNotOptimize(quadrature_sinogram(f, kB, grid, nodes));
  state.SetItemsProcessed(state.iterations() * grid * grid);
}

void BM_QuadratureSinogramSerial(benchmark::State& state) {
  const auto f = random_field(2, 2, 3, 3, 2);
  const int grid = static_cast<int>(state.range(0));
  const int nodes = default_quadrature_nodes(f, kB);
  for (auto _ : state) benchmark::DoNotOptimize(quadrature_sinogram_serial(f, kB, grid, nodes));
  state.SetItemsProcessed(state.iterations() * grid * grid);
}

void BM_Decompose(benchmark::State& state) {
  const auto f = random_kernel_element(2, static_cast<int>(state.range(0)), 4, 4, 3).f;
  for (auto _ : state) benchmark::DoNotOptimize(decompose(f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.modes().size()));
}

void BM_DecomposeSerial(benchmark::State& state) {
  const auto f = random_kernel_element(2, static_cast<int>(state.range(0)), 4, 4, 3).f;
  for (auto _ : state) benchmark::DoNotOptimize(decompose_serial(f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.modes().size()));
}

}  // namespace

BENCHMARK(BM_XraySinogram)->Arg(16)->Arg(64);
BENCHMARK(BM_XraySinogramSerial)->Arg(16)->Arg(64);
BENCHMARK(BM_QuadratureSinogram)->Arg(8)->Arg(16);
BENCHMARK(BM_QuadratureSinogramSerial)->Arg(8)->Arg(16);
BENCHMARK(BM_Decompose)->Arg(1)->Arg(3);
BENCHMARK(BM_DecomposeSerial)->Arg(1)->Arg(3);

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
