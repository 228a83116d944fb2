#ifndef LABNER_TAGGER_HPP
#define LABNER_TAGGER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "labner/features.hpp"
#include "labner/tagscheme.hpp"

namespace labner {

// Linear-chain sequence tagger: hand-crafted emission features plus a
// tag-transition matrix, decoded with Viterbi and trained as an averaged
// structured perceptron.

struct TrainConfig {
  std::size_t max_epochs = 30;
  std::size_t patience = 3;
  std::uint64_t shuffle_seed = 1;
  bool enforce_bio_at_decode = true;
  std::size_t feature_window = 2;
};

struct TaggedSentence {
  std::vector<std::string> surfaces;
  TagSequence tags;
};

class TaggerModel {
public:
  TaggerModel() = default;
  TaggerModel(LabelAlphabet alphabet, std::vector<std::string> feature_names,
              std::size_t feature_window, bool enforce_bio);

  const LabelAlphabet& alphabet() const { return alphabet_; }
  const FeatureExtractor& extractor() const { return extractor_; }
  std::size_t n_features() const { return feature_names_.size(); }
  bool enforce_bio() const { return enforce_bio_; }
  bool averaged() const { return averaged_; }
  void set_averaged(bool value) { averaged_ = value; }

  // Unknown feature strings map to npos and contribute zero weight.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t feature_id(const std::string& name) const;
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  double& emission(std::size_t feature, std::size_t tag);
  double emission(std::size_t feature, std::size_t tag) const;
  double& transition(std::size_t from, std::size_t to);
  double transition(std::size_t from, std::size_t to) const;

  std::vector<double>& emission_weights() { return emission_; }
  const std::vector<double>& emission_weights() const { return emission_; }
  std::vector<double>& transition_weights() { return transition_; }
  const std::vector<double>& transition_weights() const { return transition_; }

  // Feature ids for every position of a sentence (unknowns dropped).
  std::vector<std::vector<std::size_t>> featurize(std::span<const std::string> surfaces) const;

private:
  LabelAlphabet alphabet_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, std::size_t> feature_index_;
  std::vector<double> emission_;    // [feature][tag], row-major
  std::vector<double> transition_;  // [from][to]
  FeatureExtractor extractor_{2};
  bool enforce_bio_ = true;
  bool averaged_ = false;
};

// Highest-scoring tag sequence under the model; ties at every backpointer
// and at the final position break toward the lower alphabet index. With
// enforce_bio, transitions into an illegal I tag (and I tags at position
// 0) are excluded from the search, so the output is always valid BIO.
// An empty sentence decodes to an empty sequence.
TagSequence viterbi_decode(const TaggerModel& model, std::span<const std::string> surfaces);
std::vector<std::size_t> viterbi_decode_ids(
    const TaggerModel& model, const std::vector<std::vector<std::size_t>>& features);

// Decoding objective: sum of emission weights plus sum of adjacent-tag
// transition weights.
double sequence_score(const TaggerModel& model, std::span<const std::string> surfaces,
                      const TagSequence& tags);
double sequence_score_ids(const TaggerModel& model,
                          const std::vector<std::vector<std::size_t>>& features,
                          std::span<const std::size_t> tag_ids);

struct TrainResult {
  TaggerModel model;  // best averaged snapshot
  std::vector<double> validation_f1_history;
  double best_validation_f1 = 0.0;
  std::size_t best_epoch = 0;            // 1-based
  std::size_t epochs_run = 0;
  std::vector<std::size_t> updates_per_epoch;
};

// Averaged structured perceptron with patience-based early stopping:
// decode each training sentence, update on mismatch, track exact-match
// span micro-F1 on the validation set after every epoch, stop after
// `patience` epochs without improvement, return the best snapshot.
// Deterministic given the shuffle seed.
TrainResult train(std::span<const TaggedSentence> training,
                  std::span<const TaggedSentence> validation, const TrainConfig& config);

std::vector<TagSequence> predict(const TaggerModel& model,
                                 std::span<const std::vector<std::string>> sentences);

// Exact-match span micro-F1 between aligned gold and predicted tag
// sequences (token-index spans; predictions repaired before extraction).
double span_exact_micro_f1(std::span<const TagSequence> gold, std::span<const TagSequence> predicted);

// Versioned JSON model file.
std::string model_to_json(const TaggerModel& model);
TaggerModel model_from_json(std::string_view json_text);

}  // namespace labner

#endif  // LABNER_TAGGER_HPP
