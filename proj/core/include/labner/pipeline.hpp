#ifndef LABNER_PIPELINE_HPP
#define LABNER_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "labner/alignment.hpp"
#include "labner/ensemble.hpp"
#include "labner/tagger.hpp"

namespace labner {

// End-to-end ensembling experiment: N random train/validation splits of
// the pool, one tagger per split, predictions on a held-out test set,
// merging by each requested method for growing ensemble sizes, and
// span-level scores (both criteria) for every individual model and every
// merged output. Model i uses seed_base + i for both its split and its
// shuffle, so any single model is reproducible in isolation.
struct PipelineConfig {
  std::filesystem::path data_dir;  // standoff training pool
  std::filesystem::path test_dir;  // standoff held-out test set
  std::filesystem::path out_dir;
  std::size_t n_models = 11;
  std::uint64_t seed_base = 0;
  double train_fraction = 0.8;
  std::vector<MergeMethod> methods{MergeMethod::MajorityVote, MergeMethod::Sle};
  TrainConfig train;
  BoundaryPolicy boundary_policy = BoundaryPolicy::Error;
};

// Ensemble sizes reported: 1 when n_models is 1, otherwise the odd sizes
// 3, 5, ... up to n_models, plus n_models itself when even. Each size n
// merges the first n models.
std::vector<std::size_t> ensemble_sizes(std::size_t n_models);

struct PipelineResult {
  std::string report_json;
  std::filesystem::path report_path;
};

// Writes per-model and per-merge artifacts under out_dir as it goes
// (splits, models, predictions, merged files with sidecars), then
// report.json. Any stage failure is rethrown with the stage name;
// artifacts written so far are left in place.
PipelineResult run_pipeline(const PipelineConfig& config);

// Human-readable table rendered from the report JSON, never computed
// separately.
std::string render_pipeline_table(std::string_view report_json);

}  // namespace labner

#endif  // LABNER_PIPELINE_HPP
