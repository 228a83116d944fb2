#include <benchmark/benchmark.h>

#include <random>

#include "labner/ensemble.hpp"

using namespace labner;

namespace {

PredictionSet make_set(std::size_t n_labels, std::size_t length, std::size_t n_models,
                       std::uint64_t seed) {
  static const std::vector<std::string> pool = {"O",         "B-Action", "I-Action", "B-Reagent",
                                                "I-Reagent", "B-Amount", "I-Amount"};
  std::vector<std::string> tags(pool.begin(), pool.begin() + n_labels);
  LabelAlphabet alphabet = LabelAlphabet::from_strings(tags);
  std::mt19937_64 rng(seed);
  std::vector<TagSequence> sequences(n_models);
  for (auto& sequence : sequences) {
    sequence.resize(length);
    for (auto& tag : sequence) tag = alphabet.tag(rng() % alphabet.size());
  }
  return make_prediction_set(0, std::move(alphabet), sequences);
}

}  // namespace

// sle_merge is O(L * |Sigma|^2): linear in sentence length...
static void BM_SleMergeLength(benchmark::State& state) {
  const auto set = make_set(7, static_cast<std::size_t>(state.range(0)), 11, 42);
  for (auto _ : state) benchmark::DoNotOptimize(sle_merge(set));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SleMergeLength)->RangeMultiplier(2)->Range(8, 512)->Complexity(benchmark::oN);

// ...and quadratic in the alphabet size.
static void BM_SleMergeAlphabet(benchmark::State& state) {
  const auto set = make_set(static_cast<std::size_t>(state.range(0)), 64, 11, 42);
  for (auto _ : state) benchmark::DoNotOptimize(sle_merge(set));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SleMergeAlphabet)->DenseRange(2, 7)->Complexity(benchmark::oNSquared);

static void BM_MajorityVote(benchmark::State& state) {
  const auto set = make_set(7, static_cast<std::size_t>(state.range(0)), 11, 42);
  for (auto _ : state) benchmark::DoNotOptimize(majority_vote(set));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MajorityVote)->RangeMultiplier(2)->Range(8, 512)->Complexity(benchmark::oN);

// The exhaustive reference explodes as |Sigma|^L; useful only as contrast.
static void BM_BruteForceMerge(benchmark::State& state) {
  const auto set = make_set(4, static_cast<std::size_t>(state.range(0)), 7, 42);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_merge(set));
}
BENCHMARK(BM_BruteForceMerge)->DenseRange(2, 8, 2);

static void BM_BuildCounts(benchmark::State& state) {
  const auto set = make_set(7, 64, static_cast<std::size_t>(state.range(0)), 42);
  for (auto _ : state) benchmark::DoNotOptimize(build_counts(set));
}
BENCHMARK(BM_BuildCounts)->DenseRange(1, 11, 5);

BENCHMARK_MAIN();
