#include <benchmark/benchmark.h>

#include "plcomp/composition.hpp"
#include "plcomp/distributions.hpp"
#include "plcomp/population.hpp"
#include "plcomp/rng.hpp"

namespace {

using namespace plcomp;

SkillDistribution zipf(std::size_t d) { return SkillDistribution::make({DistributionKind::Zipf, d, 1.5, d, {}}); }

void BM_SampleGradient(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const std::size_t d = 200;
  Rng rng(1);
  const auto dist = zipf(d);
  const auto wstar = HiddenSkillVector::rademacher(d, rng);
  const auto w = init_gaussian(d, 0.1, rng).w;
  const auto sample = generate_sample(wstar, dist, k, rng);
  std::vector<double> grad(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(accumulate_sample_gradient(w, sample, 1.0, grad));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_SampleGradient)->Arg(2)->Arg(4)->Arg(8);

void BM_MinibatchStep(benchmark::State& state) {
  const std::size_t d = 50, k = 4;
  Rng rng(2);
  const auto dist = zipf(d);
  const auto wstar = HiddenSkillVector::rademacher(d, rng);
  ModelState s = init_gaussian(d, 0.1, rng);
  const double eta = default_eta(k, dist.l2_norm());
  for (auto _ : state) benchmark::DoNotOptimize(minibatch_step(s, dist, wstar, k, eta, 8, rng));
}
BENCHMARK(BM_MinibatchStep);

void BM_PopulationStep(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const std::size_t k = 4;
  Rng rng(3);
  const auto dist = zipf(d);
  const auto wstar = HiddenSkillVector::rademacher(d, rng);
  auto w = init_gaussian(d, 0.1, rng).w;
  std::vector<double> grad(d);
  const double eta = default_eta(k, dist.l2_norm());
  for (auto _ : state) {
    const auto s = population_stats(w, wstar.values(), dist.weights());
    population_gradient_into(w, wstar.values(), dist.weights(), k, s, grad);
    for (std::size_t j = 0; j < d; ++j) w[j] -= eta * grad[j];
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_PopulationStep)->Arg(50)->Arg(200)->Arg(10000);

void BM_Sampler(benchmark::State& state) {
  const auto dist = zipf(static_cast<std::size_t>(state.range(0)));
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(dist.sample(rng));
}
BENCHMARK(BM_Sampler)->Arg(50)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
