// Serial vs OpenMP kernels, plus a whole propagation on each backend.
#include <benchmark/benchmark.h>

#include <array>
#include <random>

#include "fockbloch/kernels.hpp"
#include "fockbloch/propagate.hpp"

using namespace fockbloch;

namespace {

struct Workload {
  Tridiagonal h;
  std::vector<Complex> y, out;
  std::array<std::vector<Complex>, 7> stages;
  std::array<const Complex*, 7> ptrs{};
  std::array<Real, 7> coeffs{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};

  explicit Workload(std::size_t n) : h(build_hamiltonian(ParametricTwoMode{{1.0, 0.0}, 0.7}, n - 1)), y(n), out(n) {
    std::mt19937 rng(1);
    std::normal_distribution<Real> d;
    for (auto& v : y) v = {d(rng), d(rng)};
    for (std::size_t s = 0; s < stages.size(); ++s) {
      stages[s].resize(n);
      for (auto& v : stages[s]) v = {d(rng), d(rng)};
      ptrs[s] = stages[s].data();
    }
  }
};

template <kernels::Backend B>
void BM_Rhs(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kernels::schrodinger_rhs(B, w.h, w.y, w.out);
    benchmark::DoNotOptimize(w.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <kernels::Backend B>
void BM_StageCombination(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kernels::stage_combination(B, w.y, 0.01, w.coeffs, w.ptrs, w.out);
    benchmark::DoNotOptimize(w.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <kernels::Backend B>
void BM_Propagate(benchmark::State& state) {
  const ParametricTwoMode m{{1.0, 0.0}, 0.0};
  const auto cutoff = static_cast<std::size_t>(state.range(0));
  IntegratorConfig cfg;
  cfg.sample_times = {0.5};
  cfg.backend = B;
  const auto psi0 = initial_vacuum(cutoff);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(m, psi0, cfg));
}

constexpr auto kSerial = kernels::Backend::Serial;
constexpr auto kOmp = kernels::Backend::OpenMP;

}  // namespace

BENCHMARK(BM_Rhs<kSerial>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Rhs<kOmp>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_StageCombination<kSerial>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_StageCombination<kOmp>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Propagate<kSerial>)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Propagate<kOmp>)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
