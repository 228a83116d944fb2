#ifndef LABNER_STATS_HPP
#define LABNER_STATS_HPP

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>

#include "labner/conll.hpp"

namespace labner {

// Dataset statistics over a tokenized, tagged corpus: per-label token
// counts (B-X and I-X pooled under X, plus O), protocol/sentence/token
// totals, vocabulary size, and optionally the out-of-vocabulary count
// (distinct surfaces absent from a reference vocabulary).
struct CorpusStats {
  std::size_t protocols = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t vocabulary = 0;
  std::map<std::string, std::size_t> label_token_counts;
  std::optional<std::size_t> oov;
};

std::set<std::string> vocabulary_of(std::span<const ConllSentence> sentences);

// `protocol_count` is supplied by the caller (one per document / file).
CorpusStats compute_stats(std::span<const ConllSentence> sentences, std::size_t protocol_count,
                          const std::set<std::string>* reference_vocabulary = nullptr);

// JSON with stable key order: protocols, sentences, tokens, vocabulary,
// oov (null without a reference), label_token_counts (sorted).
std::string stats_to_json(const CorpusStats& stats);

}  // namespace labner

#endif  // LABNER_STATS_HPP
