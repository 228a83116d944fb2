#include "labner/stats.hpp"

#include <nlohmann/json.hpp>

#include "labner/tagscheme.hpp"

namespace labner {

std::set<std::string> vocabulary_of(std::span<const ConllSentence> sentences) {
  std::set<std::string> vocabulary;
  for (const auto& sentence : sentences)
    for (const auto& token : sentence) vocabulary.insert(token.surface);
  return vocabulary;
}

CorpusStats compute_stats(std::span<const ConllSentence> sentences, std::size_t protocol_count,
                          const std::set<std::string>* reference_vocabulary) {
  CorpusStats stats;
  stats.protocols = protocol_count;
  std::set<std::string> vocabulary;
  for (const auto& sentence : sentences) {
    if (sentence.empty()) continue;
    ++stats.sentences;
    for (const auto& token : sentence) {
      ++stats.tokens;
      vocabulary.insert(token.surface);
      const Tag tag = parse_tag(token.tag);
      const std::string key = tag.kind == TagKind::Outside ? "O" : tag.label;
      ++stats.label_token_counts[key];
    }
  }
  stats.vocabulary = vocabulary.size();
  if (reference_vocabulary) {
    std::size_t oov = 0;
    for (const auto& surface : vocabulary)
      if (!reference_vocabulary->contains(surface)) ++oov;
    stats.oov = oov;
  }
  return stats;
}

std::string stats_to_json(const CorpusStats& stats) {
  nlohmann::ordered_json j;
  j["protocols"] = stats.protocols;
  j["sentences"] = stats.sentences;
  j["tokens"] = stats.tokens;
  j["vocabulary"] = stats.vocabulary;
  if (stats.oov)
    j["oov"] = *stats.oov;
  else
    j["oov"] = nullptr;
  nlohmann::ordered_json counts;  // std::map keys are already sorted
  for (const auto& [label, count] : stats.label_token_counts) counts[label] = count;
  j["label_token_counts"] = std::move(counts);
  return j.dump(2) + "\n";
}

}  // namespace labner
