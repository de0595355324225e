#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "survpower/design_effect.hpp"
#include "survpower/overlap.hpp"
#include "survpower/random.hpp"
#include "survpower/survival.hpp"

using namespace survpower;

static void BM_SolveAb(benchmark::State& state) {
  double phi = 0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ab(0.3, phi));
    phi = phi == 0.9 ? 0.91 : 0.9;
  }
}
BENCHMARK(BM_SolveAb);

static void BM_KappaMonteCarlo(benchmark::State& state) {
  KappaOptions opts;
  opts.n_draws = state.range(0);
  const WeightScheme scheme = WeightScheme::ipw(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(kappa_de_monte_carlo(0.5, 0.9, scheme, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KappaMonteCarlo)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

namespace {
struct CoxData {
  std::vector<double> time, weight;
  std::vector<int> event, z;
};

CoxData cox_data(int n) {
  CoxData d;
  Rng rng(3);
  for (int i = 0; i < n; ++i) {
    const int z = rng.bernoulli(0.5) ? 1 : 0;
    const double t = rng.exponential() / std::exp(-0.5 * z);
    const double c = rng.exponential() / 0.3;
    d.time.push_back(std::min(t, c));
    d.event.push_back(t <= c ? 1 : 0);
    d.z.push_back(z);
    d.weight.push_back(0.5 + rng.uniform());
  }
  return d;
}
}  // namespace

static void BM_CoxFit(benchmark::State& state) {
  const CoxData d = cox_data(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_weighted_cox(CoxSample{d.time, d.event, d.z, d.weight}));
}
BENCHMARK(BM_CoxFit)->Arg(200)->Arg(2'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

static void BM_Logistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = 6;
  Rng rng(4);
  std::vector<double> x(static_cast<std::size_t>(n) * p);
  std::vector<int> z(n);
  for (int i = 0; i < n; ++i) {
    double eta = 0.0;
    for (int j = 0; j < p; ++j) {
      x[i * p + j] = rng.normal();
      eta += 0.2 * x[i * p + j];
    }
    z[i] = rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1 : 0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(x, p, z));
}
BENCHMARK(BM_Logistic)->Arg(200)->Arg(10'000)->Unit(benchmark::kMicrosecond);
