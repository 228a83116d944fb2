#include "labner/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "labner/error.hpp"

namespace labner {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// legal[from * T + to]: may `to` follow `from` in a valid BIO sequence?
std::vector<char> bio_transition_mask(const LabelAlphabet& alphabet) {
  const std::size_t n = alphabet.size();
  std::vector<char> legal(n * n, 1);
  for (std::size_t to = 0; to < n; ++to) {
    const Tag& t = alphabet.tag(to);
    if (t.kind != TagKind::Inside) continue;
    for (std::size_t from = 0; from < n; ++from) {
      const Tag& f = alphabet.tag(from);
      legal[from * n + to] = f.kind != TagKind::Outside && f.label == t.label;
    }
  }
  return legal;
}

}  // namespace

TaggerModel::TaggerModel(LabelAlphabet alphabet, std::vector<std::string> feature_names,
                         std::size_t feature_window, bool enforce_bio)
    : alphabet_(std::move(alphabet)),
      feature_names_(std::move(feature_names)),
      extractor_(feature_window),
      enforce_bio_(enforce_bio) {
  feature_index_.reserve(feature_names_.size());
  for (std::size_t i = 0; i < feature_names_.size(); ++i) {
    if (!feature_index_.emplace(feature_names_[i], i).second)
      throw error("duplicate feature name \"" + feature_names_[i] + "\"");
  }
  emission_.assign(feature_names_.size() * alphabet_.size(), 0.0);
  transition_.assign(alphabet_.size() * alphabet_.size(), 0.0);
}

std::size_t TaggerModel::feature_id(const std::string& name) const {
  auto it = feature_index_.find(name);
  return it == feature_index_.end() ? npos : it->second;
}

double& TaggerModel::emission(std::size_t feature, std::size_t tag) {
  return emission_[feature * alphabet_.size() + tag];
}
double TaggerModel::emission(std::size_t feature, std::size_t tag) const {
  return emission_[feature * alphabet_.size() + tag];
}
double& TaggerModel::transition(std::size_t from, std::size_t to) {
  return transition_[from * alphabet_.size() + to];
}
double TaggerModel::transition(std::size_t from, std::size_t to) const {
  return transition_[from * alphabet_.size() + to];
}

std::vector<std::vector<std::size_t>> TaggerModel::featurize(
    std::span<const std::string> surfaces) const {
  std::vector<std::vector<std::size_t>> ids(surfaces.size());
  for (std::size_t k = 0; k < surfaces.size(); ++k) {
    for (const auto& name : extractor_.extract(surfaces, k)) {
      const std::size_t id = feature_id(name);
      if (id != npos) ids[k].push_back(id);
    }
  }
  return ids;
}

std::vector<std::size_t> viterbi_decode_ids(
    const TaggerModel& model, const std::vector<std::vector<std::size_t>>& features) {
  const std::size_t length = features.size();
  const std::size_t n = model.alphabet().size();
  if (length == 0) return {};
  if (n == 0) throw error("viterbi_decode: empty alphabet");

  // Emission score of every (position, tag).
  std::vector<double> emission(length * n, 0.0);
  for (std::size_t k = 0; k < length; ++k)
    for (const std::size_t f : features[k])
      for (std::size_t t = 0; t < n; ++t) emission[k * n + t] += model.emission(f, t);

  const bool enforce = model.enforce_bio();
  std::vector<char> legal;
  if (enforce) legal = bio_transition_mask(model.alphabet());

  std::vector<double> delta(n);
  std::vector<double> next(n);
  std::vector<std::size_t> backpointer(length * n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const bool illegal_start = enforce && model.alphabet().tag(t).kind == TagKind::Inside;
    delta[t] = illegal_start ? kNegInf : emission[t];
  }
  for (std::size_t k = 1; k < length; ++k) {
    for (std::size_t t = 0; t < n; ++t) {
      double best = kNegInf;
      std::size_t best_from = n;
      for (std::size_t s = 0; s < n; ++s) {
        if (enforce && !legal[s * n + t]) continue;
        if (delta[s] == kNegInf) continue;
        const double candidate = delta[s] + model.transition(s, t);
        if (best_from == n || candidate > best) {  // ties keep the lower index
          best = candidate;
          best_from = s;
        }
      }
      next[t] = best_from == n ? kNegInf : best + emission[k * n + t];
      backpointer[k * n + t] = best_from;
    }
    delta.swap(next);
  }

  std::size_t best_tag = n;
  for (std::size_t t = 0; t < n; ++t) {
    if (delta[t] == kNegInf) continue;
    if (best_tag == n || delta[t] > delta[best_tag]) best_tag = t;
  }
  if (best_tag == n) throw std::logic_error("viterbi_decode: no reachable path");

  std::vector<std::size_t> path(length);
  path[length - 1] = best_tag;
  for (std::size_t k = length - 1; k > 0; --k) path[k - 1] = backpointer[k * n + path[k]];
  return path;
}

TagSequence viterbi_decode(const TaggerModel& model, std::span<const std::string> surfaces) {
  const auto ids = viterbi_decode_ids(model, model.featurize(surfaces));
  TagSequence tags;
  tags.reserve(ids.size());
  for (const std::size_t id : ids) tags.push_back(model.alphabet().tag(id));
  return tags;
}

double sequence_score_ids(const TaggerModel& model,
                          const std::vector<std::vector<std::size_t>>& features,
                          std::span<const std::size_t> tag_ids) {
  if (features.size() != tag_ids.size())
    throw error("sequence_score: tag/feature length mismatch");
  double score = 0.0;
  for (std::size_t k = 0; k < tag_ids.size(); ++k)
    for (const std::size_t f : features[k]) score += model.emission(f, tag_ids[k]);
  for (std::size_t k = 0; k + 1 < tag_ids.size(); ++k)
    score += model.transition(tag_ids[k], tag_ids[k + 1]);
  return score;
}

double sequence_score(const TaggerModel& model, std::span<const std::string> surfaces,
                      const TagSequence& tags) {
  std::vector<std::size_t> ids;
  ids.reserve(tags.size());
  for (const Tag& tag : tags) ids.push_back(model.alphabet().index_of(tag));
  return sequence_score_ids(model, model.featurize(surfaces), ids);
}

double span_exact_micro_f1(std::span<const TagSequence> gold,
                           std::span<const TagSequence> predicted) {
  if (gold.size() != predicted.size())
    throw error("span_exact_micro_f1: corpus length mismatch");
  using Span = std::tuple<std::size_t, std::string, std::size_t, std::size_t>;
  const auto collect = [](std::span<const TagSequence> corpus) {
    std::set<Span> spans;
    for (std::size_t s = 0; s < corpus.size(); ++s) {
      const TagSequence repaired = repair_bio(corpus[s]);
      std::size_t i = 0;
      while (i < repaired.size()) {
        if (repaired[i].kind != TagKind::Begin) {
          ++i;
          continue;
        }
        std::size_t last = i;
        while (last + 1 < repaired.size() && repaired[last + 1].kind == TagKind::Inside) ++last;
        spans.emplace(s, repaired[i].label, i, last);
        i = last + 1;
      }
    }
    return spans;
  };
  const auto gold_spans = collect(gold);
  const auto pred_spans = collect(predicted);
  std::size_t tp = 0;
  for (const auto& span : pred_spans) tp += gold_spans.contains(span);
  const double precision = pred_spans.empty() ? 0.0 : static_cast<double>(tp) / pred_spans.size();
  const double recall = gold_spans.empty() ? 0.0 : static_cast<double>(tp) / gold_spans.size();
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

namespace {

// Lazy averaging bookkeeping for one weight vector: totals are brought
// up to date only when a weight changes, so sparse updates stay cheap.
class AveragingState {
public:
  explicit AveragingState(std::size_t size) : totals_(size, 0.0), stamps_(size, 0) {}

  void update(std::vector<double>& weights, std::size_t index, double delta,
              std::uint64_t clock) {
    totals_[index] += static_cast<double>(clock - stamps_[index]) * weights[index];
    stamps_[index] = clock;
    weights[index] += delta;
  }

  std::vector<double> averaged(const std::vector<double>& weights, std::uint64_t clock) const {
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double total = totals_[i] + static_cast<double>(clock - stamps_[i]) * weights[i];
      out[i] = clock == 0 ? 0.0 : total / static_cast<double>(clock);
    }
    return out;
  }

private:
  std::vector<double> totals_;
  std::vector<std::uint64_t> stamps_;
};

}  // namespace

TrainResult train(std::span<const TaggedSentence> training,
                  std::span<const TaggedSentence> validation, const TrainConfig& config) {
  if (training.empty()) throw error("train: empty training set");
  if (config.max_epochs < 1 || config.patience < 1)
    throw error("train: max_epochs and patience must be >= 1");
  for (const auto& sentence : training)
    if (sentence.surfaces.size() != sentence.tags.size())
      throw error("train: sentence with mismatched surfaces/tags");

  std::vector<Tag> observed;
  for (const auto& sentence : training)
    observed.insert(observed.end(), sentence.tags.begin(), sentence.tags.end());
  LabelAlphabet alphabet = LabelAlphabet::from_tags(observed);
  const std::size_t n_tags = alphabet.size();

  // First pass: freeze the feature dictionary in corpus order.
  FeatureExtractor extractor(config.feature_window);
  std::vector<std::string> feature_names;
  std::unordered_map<std::string, std::size_t> feature_index;
  std::vector<std::vector<std::vector<std::size_t>>> features(training.size());
  for (std::size_t s = 0; s < training.size(); ++s) {
    const auto& surfaces = training[s].surfaces;
    features[s].resize(surfaces.size());
    for (std::size_t k = 0; k < surfaces.size(); ++k) {
      for (auto& name : extractor.extract(surfaces, k)) {
        auto [it, inserted] = feature_index.emplace(name, feature_names.size());
        if (inserted) feature_names.push_back(std::move(name));
        features[s][k].push_back(it->second);
      }
    }
  }

  TaggerModel working(alphabet, feature_names, config.feature_window,
                      config.enforce_bio_at_decode);
  std::vector<std::vector<std::size_t>> gold_ids(training.size());
  for (std::size_t s = 0; s < training.size(); ++s) {
    gold_ids[s].reserve(training[s].tags.size());
    for (const Tag& tag : training[s].tags) gold_ids[s].push_back(alphabet.index_of(tag));
  }

  // Validation featurized once against the frozen dictionary.
  std::vector<std::vector<std::vector<std::size_t>>> validation_features(validation.size());
  std::vector<TagSequence> validation_gold(validation.size());
  for (std::size_t s = 0; s < validation.size(); ++s) {
    if (validation[s].surfaces.size() != validation[s].tags.size())
      throw error("train: validation sentence with mismatched surfaces/tags");
    validation_features[s] = working.featurize(validation[s].surfaces);
    validation_gold[s] = validation[s].tags;
  }

  AveragingState emission_state(feature_names.size() * n_tags);
  AveragingState transition_state(n_tags * n_tags);
  std::uint64_t clock = 1;

  const auto snapshot = [&]() {
    TaggerModel model = working;
    model.emission_weights() = emission_state.averaged(working.emission_weights(), clock);
    model.transition_weights() = transition_state.averaged(working.transition_weights(), clock);
    model.set_averaged(true);
    return model;
  };
  const auto validation_f1 = [&](const TaggerModel& model) {
    std::vector<TagSequence> predicted(validation.size());
    for (std::size_t s = 0; s < validation.size(); ++s) {
      const auto ids = viterbi_decode_ids(model, validation_features[s]);
      TagSequence tags;
      tags.reserve(ids.size());
      for (const std::size_t id : ids) tags.push_back(alphabet.tag(id));
      predicted[s] = std::move(tags);
    }
    return span_exact_micro_f1(validation_gold, predicted);
  };

  TrainResult result;
  std::vector<std::size_t> order(training.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(config.shuffle_seed);
  std::size_t epochs_since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    // Deterministic Fisher-Yates, fresh draws each epoch.
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(order[i], order[j]);
    }
    std::size_t updates = 0;
    for (const std::size_t s : order) {
      const auto predicted = viterbi_decode_ids(working, features[s]);
      if (predicted != gold_ids[s]) {
        ++updates;
        const auto& gold = gold_ids[s];
        auto& em = working.emission_weights();
        auto& tr = working.transition_weights();
        for (std::size_t k = 0; k < gold.size(); ++k) {
          if (gold[k] == predicted[k]) continue;
          for (const std::size_t f : features[s][k]) {
            emission_state.update(em, f * n_tags + gold[k], +1.0, clock);
            emission_state.update(em, f * n_tags + predicted[k], -1.0, clock);
          }
        }
        for (std::size_t k = 0; k + 1 < gold.size(); ++k) {
          if (gold[k] == predicted[k] && gold[k + 1] == predicted[k + 1]) continue;
          transition_state.update(tr, gold[k] * n_tags + gold[k + 1], +1.0, clock);
          transition_state.update(tr, predicted[k] * n_tags + predicted[k + 1], -1.0, clock);
        }
      }
      ++clock;
    }
    result.updates_per_epoch.push_back(updates);
    result.epochs_run = epoch;

    const TaggerModel candidate = snapshot();
    const double f1 = validation_f1(candidate);
    result.validation_f1_history.push_back(f1);
    if (epoch == 1 || f1 > result.best_validation_f1) {
      result.best_validation_f1 = f1;
      result.best_epoch = epoch;
      result.model = candidate;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
    }
    if (epochs_since_best >= config.patience) break;
  }
  return result;
}

std::vector<TagSequence> predict(const TaggerModel& model,
                                 std::span<const std::vector<std::string>> sentences) {
  std::vector<TagSequence> predictions;
  predictions.reserve(sentences.size());
  for (const auto& sentence : sentences) predictions.push_back(viterbi_decode(model, sentence));
  return predictions;
}

std::string model_to_json(const TaggerModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "labner-tagger";
  j["format_version"] = 1;
  nlohmann::ordered_json alphabet = nlohmann::ordered_json::array();
  for (const Tag& tag : model.alphabet().tags()) alphabet.push_back(tag.to_string());
  j["alphabet"] = std::move(alphabet);
  j["feature_window"] = model.extractor().window();
  j["enforce_bio"] = model.enforce_bio();
  j["averaged"] = model.averaged();
  j["features"] = model.feature_names();
  j["emission"] = model.emission_weights();
  j["transition"] = model.transition_weights();
  return j.dump() + "\n";
}

TaggerModel model_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("model file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "labner-tagger")
      throw parse_error("model file: unknown format");
    if (j.at("format_version").get<int>() != 1)
      throw parse_error("model file: unsupported format_version");
    const auto alphabet_texts = j.at("alphabet").get<std::vector<std::string>>();
    LabelAlphabet alphabet = LabelAlphabet::from_strings(alphabet_texts);
    if (alphabet.size() != alphabet_texts.size())
      throw parse_error("model file: alphabet not sorted and unique");
    for (std::size_t i = 0; i < alphabet_texts.size(); ++i)
      if (alphabet.tag(i).to_string() != alphabet_texts[i])
        throw parse_error("model file: alphabet not in canonical order");

    TaggerModel model(std::move(alphabet), j.at("features").get<std::vector<std::string>>(),
                      j.at("feature_window").get<std::size_t>(),
                      j.at("enforce_bio").get<bool>());
    model.set_averaged(j.at("averaged").get<bool>());
    auto emission = j.at("emission").get<std::vector<double>>();
    auto transition = j.at("transition").get<std::vector<double>>();
    if (emission.size() != model.n_features() * model.alphabet().size())
      throw parse_error("model file: emission weight count mismatch");
    if (transition.size() != model.alphabet().size() * model.alphabet().size())
      throw parse_error("model file: transition weight count mismatch");
    for (const double w : emission)
      if (!std::isfinite(w)) throw parse_error("model file: non-finite emission weight");
    for (const double w : transition)
      if (!std::isfinite(w)) throw parse_error("model file: non-finite transition weight");
    model.emission_weights() = std::move(emission);
    model.transition_weights() = std::move(transition);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("model file: ") + e.what());
  }
}

}  // namespace labner
