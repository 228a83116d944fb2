#include "labner/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "labner/error.hpp"

namespace labner {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

MergedPrediction finish(MergeMethod method, const LabelAlphabet& alphabet,
                        std::span<const std::size_t> raw_ids, double log_score) {
  MergedPrediction merged;
  merged.method = method;
  merged.log_score = log_score;
  merged.pre_repair.reserve(raw_ids.size());
  for (const std::size_t id : raw_ids) merged.pre_repair.push_back(alphabet.tag(id));
  merged.tags = repair_bio(merged.pre_repair, &merged.repairs);
  return merged;
}

}  // namespace

double merge_log_count(int count) {
  if (count < 0) throw error("negative vote count");
  if (count == 0) return kNegInf;
  return std::round(std::log(static_cast<double>(count)) * 0x1p40) * 0x1p-40;
}

std::string merge_method_name(MergeMethod method) {
  return method == MergeMethod::MajorityVote ? "majority" : "sle";
}

MergeMethod merge_method_from_name(std::string_view name) {
  if (name == "majority" || name == "majv") return MergeMethod::MajorityVote;
  if (name == "sle") return MergeMethod::Sle;
  throw error("unknown merge method \"" + std::string(name) + "\" (expected majority|sle)");
}

PredictionSet make_prediction_set(std::size_t sentence_index, LabelAlphabet alphabet,
                                  std::span<const TagSequence> predictions) {
  if (predictions.empty()) throw error("prediction set needs at least one model");
  PredictionSet set;
  set.sentence_index = sentence_index;
  set.alphabet = std::move(alphabet);
  const std::size_t length = predictions.front().size();
  for (const auto& sequence : predictions) {
    if (sequence.size() != length)
      throw error("prediction set: sequences of differing length (" +
                  std::to_string(sequence.size()) + " vs " + std::to_string(length) + ")");
    std::vector<std::size_t> ids;
    ids.reserve(length);
    for (const Tag& tag : sequence) ids.push_back(set.alphabet.index_of(tag));
    set.sequences.push_back(std::move(ids));
  }
  return set;
}

TransitionCounts build_counts(const PredictionSet& predictions) {
  const std::size_t length = predictions.length();
  const std::size_t n = predictions.alphabet.size();
  if (length == 0) throw error("build_counts: empty sentence");
  TransitionCounts counts;
  counts.n_labels = n;
  counts.length = length;
  counts.state.assign(length, std::vector<int>(n, 0));
  counts.transition.assign(length == 0 ? 0 : length - 1, std::vector<int>(n * n, 0));
  for (const auto& sequence : predictions.sequences) {
    for (std::size_t k = 0; k < length; ++k) ++counts.state[k][sequence[k]];
    for (std::size_t k = 0; k + 1 < length; ++k)
      ++counts.transition[k][sequence[k] * n + sequence[k + 1]];
  }
  return counts;
}

MergedPrediction majority_vote(const PredictionSet& predictions) {
  const std::size_t length = predictions.length();
  const std::size_t n = predictions.alphabet.size();
  std::vector<std::size_t> chosen(length);
  double log_score = 0.0;
  std::vector<int> votes(n);
  for (std::size_t k = 0; k < length; ++k) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const auto& sequence : predictions.sequences) ++votes[sequence[k]];
    std::size_t winner = 0;
    for (std::size_t t = 1; t < n; ++t)
      if (votes[t] > votes[winner]) winner = t;  // ties keep the lower index
    chosen[k] = winner;
    log_score += merge_log_count(votes[winner]);
  }
  return finish(MergeMethod::MajorityVote, predictions.alphabet, chosen, log_score);
}

MergedPrediction sle_merge(const PredictionSet& predictions) {
  const TransitionCounts counts = build_counts(predictions);
  const std::size_t length = counts.length;
  const std::size_t n = counts.n_labels;

  std::vector<double> delta(n);
  std::vector<double> next(n);
  std::vector<std::size_t> backpointer(length * n, 0);
  for (std::size_t t = 0; t < n; ++t) delta[t] = merge_log_count(counts.state_count(0, t));
  for (std::size_t k = 1; k < length; ++k) {
    for (std::size_t t = 0; t < n; ++t) {
      double best = kNegInf;
      std::size_t best_from = n;
      for (std::size_t s = 0; s < n; ++s) {
        const double candidate = delta[s] + merge_log_count(counts.transition_count(k - 1, s, t));
        if (best_from == n || candidate > best) {  // ties keep the lower index
          best = candidate;
          best_from = s;
        }
      }
      next[t] = best + merge_log_count(counts.state_count(k, t));
      backpointer[k * n + t] = best_from;
    }
    delta.swap(next);
  }
  std::size_t best_tag = 0;
  for (std::size_t t = 1; t < n; ++t)
    if (delta[t] > delta[best_tag]) best_tag = t;
  if (delta[best_tag] == kNegInf)
    throw std::logic_error("sle_merge: no finite path; counts are inconsistent");

  std::vector<std::size_t> path(length);
  path[length - 1] = best_tag;
  for (std::size_t k = length - 1; k > 0; --k) path[k - 1] = backpointer[k * n + path[k]];
  return finish(MergeMethod::Sle, predictions.alphabet, path, delta[best_tag]);
}

MergedPrediction brute_force_merge(const PredictionSet& predictions) {
  const TransitionCounts counts = build_counts(predictions);
  const std::size_t length = counts.length;
  const std::size_t n = counts.n_labels;

  double combinations = 1.0;
  for (std::size_t k = 0; k < length; ++k) {
    combinations *= static_cast<double>(n);
    if (combinations > 1e6)
      throw error("brute_force_merge: |Sigma|^L exceeds the 10^6 guard");
  }

  // The tie-break shared with the DP: among maximal-score sequences, the
  // one whose reversed reading (y_L, ..., y_1) is lexicographically
  // smallest by alphabet index.
  const auto reversed_less = [](const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
    for (std::size_t k = a.size(); k > 0; --k) {
      if (a[k - 1] != b[k - 1]) return a[k - 1] < b[k - 1];
    }
    return false;
  };

  std::vector<std::size_t> candidate(length, 0);
  std::vector<std::size_t> best_sequence;
  double best_score = kNegInf;
  bool have_best = false;
  while (true) {
    // Same left-to-right fold as the DP so equal paths score bit-identically.
    double score = merge_log_count(counts.state_count(0, candidate[0]));
    for (std::size_t k = 1; k < length; ++k) {
      score += merge_log_count(counts.transition_count(k - 1, candidate[k - 1], candidate[k]));
      score += merge_log_count(counts.state_count(k, candidate[k]));
    }
    if (!have_best || score > best_score ||
        (score == best_score && reversed_less(candidate, best_sequence))) {
      have_best = true;
      best_score = score;
      best_sequence = candidate;
    }
    // Odometer increment.
    std::size_t k = 0;
    while (k < length && ++candidate[k] == n) {
      candidate[k] = 0;
      ++k;
    }
    if (k == length) break;
  }
  if (best_score == kNegInf)
    throw std::logic_error("brute_force_merge: no finite sequence; counts are inconsistent");
  return finish(MergeMethod::Sle, predictions.alphabet, best_sequence, best_score);
}

CorpusMergeResult merge_corpus(std::span<const std::vector<ConllSentence>> predictions,
                               MergeMethod method,
                               const std::optional<LabelAlphabet>& alphabet) {
  if (predictions.empty()) throw error("merge_corpus: no prediction files");
  const auto& reference = predictions.front();
  for (std::size_t m = 1; m < predictions.size(); ++m) {
    if (predictions[m].size() != reference.size())
      throw error("merge_corpus: prediction " + std::to_string(m) + " has " +
                  std::to_string(predictions[m].size()) + " sentences, expected " +
                  std::to_string(reference.size()) + "; first mismatch at sentence index " +
                  std::to_string(std::min(predictions[m].size(), reference.size())));
    for (std::size_t s = 0; s < reference.size(); ++s) {
      if (predictions[m][s].size() != reference[s].size())
        throw error("merge_corpus: sentence " + std::to_string(s) + ": prediction " +
                    std::to_string(m) + " has " + std::to_string(predictions[m][s].size()) +
                    " tokens, expected " + std::to_string(reference[s].size()));
      for (std::size_t k = 0; k < reference[s].size(); ++k)
        if (predictions[m][s][k].surface != reference[s][k].surface)
          throw error("merge_corpus: sentence " + std::to_string(s) + ", token " +
                      std::to_string(k) + ": surface \"" + predictions[m][s][k].surface +
                      "\" differs from \"" + reference[s][k].surface + "\"");
    }
  }

  LabelAlphabet sigma;
  if (alphabet) {
    sigma = *alphabet;
  } else {
    std::vector<std::string> observed;
    for (const auto& corpus : predictions)
      for (const auto& sentence : corpus)
        for (const auto& token : sentence) observed.push_back(token.tag);
    sigma = LabelAlphabet::from_strings(observed);
  }

  CorpusMergeResult result;
  result.merged.resize(reference.size());
  result.records.resize(reference.size());
  for (std::size_t s = 0; s < reference.size(); ++s) {
    std::vector<TagSequence> sequences(predictions.size());
    for (std::size_t m = 0; m < predictions.size(); ++m) {
      sequences[m].reserve(predictions[m][s].size());
      for (const auto& token : predictions[m][s]) sequences[m].push_back(parse_tag(token.tag));
    }
    const PredictionSet set = make_prediction_set(s, sigma, sequences);
    const MergedPrediction merged =
        method == MergeMethod::MajorityVote ? majority_vote(set) : sle_merge(set);

    ConllSentence sentence(reference[s].size());
    for (std::size_t k = 0; k < sentence.size(); ++k)
      sentence[k] = {reference[s][k].surface, merged.tags[k].to_string()};
    result.merged[s] = std::move(sentence);
    result.records[s] = {s, merged.log_score, merged.repairs, merged.pre_repair};
  }
  return result;
}

std::string merge_sidecar_json(const CorpusMergeResult& result, MergeMethod method) {
  nlohmann::ordered_json j;
  j["method"] = merge_method_name(method);
  nlohmann::ordered_json sentences = nlohmann::ordered_json::array();
  for (const auto& record : result.records) {
    nlohmann::ordered_json entry;
    entry["sentence_index"] = record.sentence_index;
    entry["log_score"] = record.log_score;
    entry["repairs"] = record.repairs;
    nlohmann::ordered_json tags = nlohmann::ordered_json::array();
    for (const Tag& tag : record.pre_repair) tags.push_back(tag.to_string());
    entry["pre_repair"] = std::move(tags);
    sentences.push_back(std::move(entry));
  }
  j["sentences"] = std::move(sentences);
  return j.dump(2) + "\n";
}

}  // namespace labner
