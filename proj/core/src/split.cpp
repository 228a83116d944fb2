#include "labner/split.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "labner/error.hpp"

namespace labner {

std::vector<std::string> SplitSpec::side(SplitSide which) const {
  std::vector<std::string> ids;
  for (const auto& [id, side] : assignment)
    if (side == which) ids.push_back(id);
  return ids;
}

SplitSpec generate_split(std::vector<std::string> doc_ids, std::uint64_t seed,
                         double train_fraction) {
  if (doc_ids.empty()) throw error("generate_split: no document ids");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw error("generate_split: train fraction must lie in (0, 1)");
  std::sort(doc_ids.begin(), doc_ids.end());
  if (std::adjacent_find(doc_ids.begin(), doc_ids.end()) != doc_ids.end())
    throw error("generate_split: duplicate document id");

  // Explicit Fisher-Yates; std::shuffle's draw sequence is not pinned by
  // the standard, and the assignment must reproduce bit-for-bit.
  std::mt19937_64 rng(seed);
  for (std::size_t i = doc_ids.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(doc_ids[i], doc_ids[j]);
  }

  const auto n = doc_ids.size();
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n)
    throw error("generate_split: fraction " + std::to_string(train_fraction) + " leaves a side empty for " +
                std::to_string(n) + " documents");

  SplitSpec spec;
  spec.seed = seed;
  spec.train_fraction = train_fraction;
  for (std::size_t i = 0; i < n; ++i)
    spec.assignment.emplace(std::move(doc_ids[i]),
                            i < n_train ? SplitSide::Train : SplitSide::Validation);
  return spec;
}

std::string split_to_json(const SplitSpec& spec) {
  nlohmann::ordered_json j;
  j["seed"] = spec.seed;
  j["train_fraction"] = spec.train_fraction;
  nlohmann::ordered_json assignment;
  for (const auto& [id, side] : spec.assignment)
    assignment[id] = side == SplitSide::Train ? "train" : "validation";
  j["assignment"] = std::move(assignment);
  return j.dump(2) + "\n";
}

SplitSpec split_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("split spec: ") + e.what());
  }
  SplitSpec spec;
  try {
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.train_fraction = j.at("train_fraction").get<double>();
    for (const auto& [id, side] : j.at("assignment").items()) {
      const auto text = side.get<std::string>();
      if (text != "train" && text != "validation")
        throw parse_error("split spec: unknown side \"" + text + "\"");
      spec.assignment.emplace(id, text == "train" ? SplitSide::Train : SplitSide::Validation);
    }
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("split spec: ") + e.what());
  }
  return spec;
}

}  // namespace labner
