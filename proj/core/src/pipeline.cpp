#include "labner/pipeline.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "labner/dataset.hpp"
#include "labner/error.hpp"
#include "labner/eval.hpp"
#include "labner/split.hpp"

namespace labner {

namespace {

template <typename F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    throw error("pipeline stage \"" + name + "\": " + e.what());
  }
}

struct CriterionScores {
  double exact = 0.0;
  double partial = 0.0;
};

CriterionScores score_against(const PreparedCorpus& test,
                              std::span<const TagSequence> predictions) {
  const auto predicted = predicted_mentions_by_document(test, predictions);
  const auto gold = gold_mentions_by_document(test);
  CriterionScores scores;
  scores.exact = score_mentions(predicted, gold, MatchCriterion::Exact).micro.f1;
  scores.partial = score_mentions(predicted, gold, MatchCriterion::Partial).micro.f1;
  return scores;
}

}  // namespace

std::vector<std::size_t> ensemble_sizes(std::size_t n_models) {
  if (n_models <= 1) return {n_models};
  std::vector<std::size_t> sizes;
  for (std::size_t n = 3; n <= n_models; n += 2) sizes.push_back(n);
  if (n_models % 2 == 0 || sizes.empty()) sizes.push_back(n_models);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  if (config.n_models < 1) throw error("pipeline: n_models must be >= 1");
  if (config.methods.empty()) throw error("pipeline: no merge methods requested");

  std::filesystem::create_directories(config.out_dir);

  const PreparedCorpus pool = stage("load training pool", [&] {
    return prepare_corpus(read_standoff_dir(config.data_dir), config.boundary_policy);
  });
  const PreparedCorpus test = stage("load test set", [&] {
    return prepare_corpus(read_standoff_dir(config.test_dir), config.boundary_policy);
  });
  if (pool.documents().empty()) throw error("pipeline: empty training pool");
  if (test.documents().empty()) throw error("pipeline: empty test set");

  std::vector<std::string> pool_ids;
  pool_ids.reserve(pool.documents().size());
  for (const auto& annotated : pool.documents()) pool_ids.push_back(annotated.doc.id);

  std::vector<std::vector<std::string>> test_surfaces;
  test_surfaces.reserve(test.sentences.size());
  for (const auto& sentence : test.sentences) test_surfaces.push_back(sentence.surfaces);

  nlohmann::ordered_json individual = nlohmann::ordered_json::array();
  std::vector<std::vector<ConllSentence>> prediction_files;
  std::vector<double> exact_f1s;
  std::vector<double> partial_f1s;

  for (std::size_t i = 1; i <= config.n_models; ++i) {
    const std::uint64_t seed = config.seed_base + i;
    const std::string tag = std::to_string(i);

    const SplitSpec split = stage("split " + tag, [&] {
      return generate_split(pool_ids, seed, config.train_fraction);
    });
    write_text_file(config.out_dir / ("split_" + tag + ".json"), split_to_json(split));

    std::vector<TaggedSentence> train_sentences;
    std::vector<TaggedSentence> validation_sentences;
    for (std::size_t s = 0; s < pool.sentences.size(); ++s) {
      const std::string& doc_id = pool.documents()[pool.refs[s].document].doc.id;
      if (split.assignment.at(doc_id) == SplitSide::Train)
        train_sentences.push_back(pool.sentences[s]);
      else
        validation_sentences.push_back(pool.sentences[s]);
    }

    TrainConfig train_config = config.train;
    train_config.shuffle_seed = seed;
    const TrainResult trained = stage("train " + tag, [&] {
      return train(train_sentences, validation_sentences, train_config);
    });
    write_text_file(config.out_dir / ("model_" + tag + ".json"), model_to_json(trained.model));

    const std::vector<TagSequence> predictions = stage("tag " + tag, [&] {
      return predict(trained.model, test_surfaces);
    });
    const auto prediction_conll = predictions_to_conll(test, predictions);
    write_conll_file(prediction_conll, config.out_dir / ("pred_" + tag + ".conll"));

    const CriterionScores scores = stage("score " + tag, [&] {
      return score_against(test, predictions);
    });
    exact_f1s.push_back(scores.exact);
    partial_f1s.push_back(scores.partial);

    nlohmann::ordered_json entry;
    entry["model"] = i;
    entry["seed"] = seed;
    entry["train_documents"] = split.side(SplitSide::Train).size();
    entry["validation_documents"] = split.side(SplitSide::Validation).size();
    entry["epochs_run"] = trained.epochs_run;
    entry["best_epoch"] = trained.best_epoch;
    entry["validation_f1"] = trained.best_validation_f1;
    entry["exact_micro_f1"] = scores.exact;
    entry["partial_micro_f1"] = scores.partial;
    individual.push_back(std::move(entry));

    prediction_files.push_back(prediction_conll);
  }

  nlohmann::ordered_json ensembles = nlohmann::ordered_json::array();
  for (const std::size_t n : ensemble_sizes(config.n_models)) {
    for (const MergeMethod method : config.methods) {
      const std::string name = merge_method_name(method) + "_" + std::to_string(n);
      const CorpusMergeResult merged = stage("merge " + name, [&] {
        const std::span<const std::vector<ConllSentence>> first_n(prediction_files.data(), n);
        return merge_corpus(first_n, method);
      });
      write_conll_file(merged.merged, config.out_dir / ("merged_" + name + ".conll"));
      write_text_file(config.out_dir / ("merged_" + name + ".json"),
                      merge_sidecar_json(merged, method));

      std::vector<TagSequence> merged_tags(merged.merged.size());
      for (std::size_t s = 0; s < merged.merged.size(); ++s) {
        TagSequence tags;
        tags.reserve(merged.merged[s].size());
        for (const auto& token : merged.merged[s]) tags.push_back(parse_tag(token.tag));
        merged_tags[s] = std::move(tags);
      }
      const CriterionScores scores = stage("score " + name, [&] {
        return score_against(test, merged_tags);
      });

      nlohmann::ordered_json entry;
      entry["n"] = n;
      entry["method"] = merge_method_name(method);
      entry["exact_micro_f1"] = scores.exact;
      entry["partial_micro_f1"] = scores.partial;
      ensembles.push_back(std::move(entry));
    }
  }

  const auto summary = [](const std::vector<double>& values) {
    nlohmann::ordered_json s;
    double sum = 0.0;
    double lo = values.front();
    double hi = values.front();
    for (const double v : values) {
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    s["mean"] = sum / static_cast<double>(values.size());
    s["min"] = lo;
    s["max"] = hi;
    return s;
  };

  nlohmann::ordered_json report;
  report["n_models"] = config.n_models;
  report["seed_base"] = config.seed_base;
  report["train_fraction"] = config.train_fraction;
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const MergeMethod method : config.methods) methods.push_back(merge_method_name(method));
  report["methods"] = std::move(methods);
  report["train_pool_documents"] = pool.documents().size();
  report["test_documents"] = test.documents().size();
  report["test_sentences"] = test.sentences.size();
  report["individual"] = std::move(individual);
  nlohmann::ordered_json individual_summary;
  individual_summary["exact_micro_f1"] = summary(exact_f1s);
  individual_summary["partial_micro_f1"] = summary(partial_f1s);
  report["individual_summary"] = std::move(individual_summary);
  report["ensembles"] = std::move(ensembles);

  PipelineResult result;
  result.report_json = report.dump(2) + "\n";
  result.report_path = config.out_dir / "report.json";
  write_text_file(result.report_path, result.report_json);
  return result;
}

std::string render_pipeline_table(std::string_view report_json) {
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(report_json);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("pipeline report: ") + e.what());
  }
  const std::vector<std::string> methods = report.at("methods").get<std::vector<std::string>>();

  std::ostringstream out;
  out << std::left << std::setw(12) << "#ensembles";
  for (const auto& criterion : {"exact", "partial"})
    for (const auto& method : methods)
      out << std::setw(16) << (method + "/" + criterion);
  out << "\n";

  // rows keyed by n, columns in method order
  std::vector<std::size_t> sizes;
  for (const auto& entry : report.at("ensembles")) {
    const auto n = entry.at("n").get<std::size_t>();
    if (sizes.empty() || sizes.back() != n) sizes.push_back(n);
  }
  for (const std::size_t n : sizes) {
    out << std::left << std::setw(12) << n;
    for (const auto& criterion : {"exact", "partial"}) {
      for (const auto& method : methods) {
        for (const auto& entry : report.at("ensembles")) {
          if (entry.at("n").get<std::size_t>() != n ||
              entry.at("method").get<std::string>() != method)
            continue;
          out << std::fixed << std::setprecision(4) << std::setw(16)
              << entry.at(std::string(criterion) + "_micro_f1").get<double>();
        }
      }
    }
    out << "\n";
  }
  for (const auto& criterion : {"exact", "partial"}) {
    const auto& s = report.at("individual_summary").at(std::string(criterion) + "_micro_f1");
    out << "individual micro-F1 (" << criterion << "): mean " << std::fixed
        << std::setprecision(4) << s.at("mean").get<double>() << "  min "
        << s.at("min").get<double>() << "  max " << s.at("max").get<double>() << "\n";
  }
  return out.str();
}

}  // namespace labner
