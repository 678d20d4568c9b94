#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include <Eigen/Eigenvalues>

#include "qutrit/qutrit.hpp"

namespace {

using namespace qutrit;

std::vector<BlochVector> random_points(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> u8(kX8Min, kX8Max);
  std::vector<BlochVector> v;
  v.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Coords x;
    for (std::size_t i = 0; i < kBlochDim; ++i) x[i] = i == kX8 ? u8(rng) : u(rng);
    v.emplace_back(x);
  }
  return v;
}

void BM_IsPhysicalClosedForm(benchmark::State& state) {
  const auto pts = random_points(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_physical(pts[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IsPhysicalClosedForm);

void BM_IsPhysicalEigenSolver(benchmark::State& state) {
  const auto pts = random_points(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    const Matrix3c m = bloch_to_density(pts[i++ & 4095]).matrix();
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(m, Eigen::EigenvaluesOnly);
    benchmark::DoNotOptimize(es.eigenvalues().minCoeff() >= 0);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IsPhysicalEigenSolver);

void BM_IntegrateSlice(benchmark::State& state) {
  IntegratorConfig cfg;
  cfg.n_samples = 1u << 18;
  cfg.threads = 1;
  cfg.sequence = state.range(1) ? Sequence::LowDiscrepancy : Sequence::PseudoRandom;
  const PriorSpec prior = state.range(0) ? PriorSpec::slater() : PriorSpec::constant();
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_slice(0.5, prior, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_samples);
}
BENCHMARK(BM_IntegrateSlice)
    ->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"slater", "lowdisc"})
    ->Unit(benchmark::kMillisecond);

void BM_FiniteNLikelihood(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const FrequencyLikelihood lik(enumerate_phi(AverageRegion::interval(0.48, 0.52), n), n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lik(0.6, 0.3, 0.1));
  }
  state.counters["terms"] = static_cast<double>(lik.size());
}
BENCHMARK(BM_FiniteNLikelihood)->Arg(50)->Arg(200)->Arg(800);

void BM_MaxEntState(benchmark::State& state) {
  double m = -0.99;
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxent_state(m));
    m = m > 0.98 ? -0.99 : m + 0.01;
  }
}
BENCHMARK(BM_MaxEntState);

}  // namespace

BENCHMARK_MAIN();
