#include <benchmark/benchmark.h>

#include <random>

#include "labner/features.hpp"
#include "labner/tagger.hpp"

using namespace labner;

namespace {

TaggerModel make_model(std::size_t n_labels, std::size_t n_features, std::uint64_t seed) {
  static const std::vector<std::string> pool = {"O",         "B-Action", "I-Action", "B-Reagent",
                                                "I-Reagent", "B-Amount", "I-Amount"};
  std::vector<std::string> tags(pool.begin(), pool.begin() + n_labels);
  std::vector<std::string> features;
  features.reserve(n_features);
  for (std::size_t i = 0; i < n_features; ++i) features.push_back("w=tok" + std::to_string(i));
  TaggerModel model(LabelAlphabet::from_strings(tags), features, 2, true);
  std::mt19937_64 rng(seed);
  for (double& w : model.emission_weights()) w = static_cast<double>(rng() % 9) - 4.0;
  for (double& w : model.transition_weights()) w = static_cast<double>(rng() % 9) - 4.0;
  return model;
}

std::vector<std::string> make_sentence(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> surfaces(length);
  for (auto& surface : surfaces) surface = "tok" + std::to_string(rng() % 64);
  return surfaces;
}

}  // namespace

static void BM_ViterbiDecode(benchmark::State& state) {
  const auto model = make_model(7, 64, 1);
  const auto sentence = make_sentence(static_cast<std::size_t>(state.range(0)), 2);
  const auto features = model.featurize(sentence);
  for (auto _ : state) benchmark::DoNotOptimize(viterbi_decode_ids(model, features));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ViterbiDecode)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oN);

static void BM_FeatureExtraction(benchmark::State& state) {
  const FeatureExtractor extractor(2);
  const auto sentence = make_sentence(32, 3);
  for (auto _ : state) {
    for (std::size_t k = 0; k < sentence.size(); ++k)
      benchmark::DoNotOptimize(extractor.extract(sentence, k));
  }
}
BENCHMARK(BM_FeatureExtraction);

BENCHMARK_MAIN();
