#ifndef LABNER_ENSEMBLE_HPP
#define LABNER_ENSEMBLE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "labner/conll.hpp"
#include "labner/tagscheme.hpp"

namespace labner {

enum class MergeMethod { MajorityVote, Sle };

std::string merge_method_name(MergeMethod method);
MergeMethod merge_method_from_name(std::string_view name);

// Log of a vote count, with log(0) = -infinity and no smoothing. Values
// are rounded to multiples of 2^-40 so that path scores (sums of a few
// hundred terms, each below 8) add without any floating-point rounding:
// equal objective values then compare exactly equal, which makes the
// tie-break order well-defined and lets the DP and the exhaustive
// reference agree bit-for-bit.
double merge_log_count(int count);

// N aligned predictions for one sentence, as indices into a shared
// alphabet. All sequences have the same length L; N >= 1.
struct PredictionSet {
  std::size_t sentence_index = 0;
  LabelAlphabet alphabet;
  std::vector<std::vector<std::size_t>> sequences;  // N x L

  std::size_t n_models() const { return sequences.size(); }
  std::size_t length() const { return sequences.empty() ? 0 : sequences.front().size(); }
};

// Validates lengths and membership; throws error on violation.
PredictionSet make_prediction_set(std::size_t sentence_index, LabelAlphabet alphabet,
                                  std::span<const TagSequence> predictions);

// Position-specific vote counts: state counts U^k (how many models emit
// tag t at position k) and transition counts T^k (how many models emit
// the pair (s, t) at positions (k, k+1)). Every U^k sums to N; every T^k
// sums to N.
struct TransitionCounts {
  std::size_t n_labels = 0;
  std::size_t length = 0;
  std::vector<std::vector<int>> state;       // L rows of |Sigma|
  std::vector<std::vector<int>> transition;  // L-1 rows of |Sigma| x |Sigma|, row-major

  int state_count(std::size_t position, std::size_t tag) const {
    return state[position][tag];
  }
  int transition_count(std::size_t position, std::size_t from, std::size_t to) const {
    return transition[position][from * n_labels + to];
  }
};

TransitionCounts build_counts(const PredictionSet& predictions);

struct MergedPrediction {
  MergeMethod method = MergeMethod::MajorityVote;
  TagSequence tags;        // after BIO repair
  TagSequence pre_repair;  // the raw merged sequence
  double log_score = 0.0;  // of pre_repair under the method's objective
  std::size_t repairs = 0; // positions rewritten by repair
};

// Per-position mode over the N predictions; ties break toward the lower
// alphabet index. log_score is the sum of log vote counts of the chosen
// tags. The result is BIO-repaired; the raw sequence is kept alongside.
MergedPrediction majority_vote(const PredictionSet& predictions);

// Structured Learning Ensembling: the sequence maximizing
//   prod_k T^k(y_k, y_{k+1}) * prod_k U^k(y_k)
// found by Viterbi over log counts (log 0 = -inf, no smoothing). Ties
// break toward the lower alphabet index at every backpointer and at the
// final position. The maximum is always finite: every input sequence
// scores >= 0 in the log domain. The result is BIO-repaired; the raw
// argmax and its log score are kept alongside.
MergedPrediction sle_merge(const PredictionSet& predictions);

// Exhaustive reference for sle_merge: scores every |Sigma|^L sequence
// (guarded to at most 10^6) with the identical log-domain fold and the
// identical tie-break (lowest reversed-lexicographic index order among
// maxima). Throws error when the guard is exceeded.
MergedPrediction brute_force_merge(const PredictionSet& predictions);

// Corpus-level merging of N aligned CoNLL predictions. Inputs must agree
// sentence-by-sentence and token-by-token on surfaces; the alphabet
// defaults to the union of observed tags.
struct MergeSentenceRecord {
  std::size_t sentence_index = 0;
  double log_score = 0.0;
  std::size_t repairs = 0;
  TagSequence pre_repair;
};

struct CorpusMergeResult {
  std::vector<ConllSentence> merged;
  std::vector<MergeSentenceRecord> records;
};

CorpusMergeResult merge_corpus(std::span<const std::vector<ConllSentence>> predictions,
                               MergeMethod method,
                               const std::optional<LabelAlphabet>& alphabet = std::nullopt);

// Sidecar schema: {"method": ..., "sentences": [{"sentence_index",
// "log_score", "repairs", "pre_repair"}, ...]}.
std::string merge_sidecar_json(const CorpusMergeResult& result, MergeMethod method);

}  // namespace labner

#endif  // LABNER_ENSEMBLE_HPP
