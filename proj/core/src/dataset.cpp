#include "labner/dataset.hpp"

#include "labner/error.hpp"
#include "labner/tokenizer.hpp"

namespace labner {

PreparedCorpus prepare_corpus(std::vector<StandoffDocument> documents, BoundaryPolicy policy) {
  PreparedCorpus prepared;
  for (auto& standoff : documents) {
    AnnotatedDocument annotated;
    annotated.doc = std::move(standoff.doc);
    annotated.mentions = std::move(standoff.mentions);
    annotated.tokens = tokenize(annotated.doc);
    prepared.corpus.documents.push_back(std::move(annotated));
  }
  for (std::size_t d = 0; d < prepared.corpus.documents.size(); ++d) {
    const auto& annotated = prepared.corpus.documents[d];
    AlignResult aligned;
    try {
      aligned = align_mentions_to_tags(annotated.tokens, annotated.mentions,
                                       annotated.doc.steps.size(), policy);
    } catch (const error& e) {
      throw error(annotated.doc.id + ": " + e.what());
    }
    prepared.snapped += aligned.snapped;

    std::vector<std::vector<Token>> by_step(annotated.doc.steps.size());
    for (const Token& token : annotated.tokens) by_step[token.sentence_index].push_back(token);
    for (std::size_t step = 0; step < by_step.size(); ++step) {
      if (by_step[step].empty()) continue;
      TaggedSentence sentence;
      sentence.tags = aligned.sentences[step];
      sentence.surfaces.reserve(by_step[step].size());
      for (const Token& token : by_step[step]) sentence.surfaces.push_back(token.surface);
      prepared.sentences.push_back(std::move(sentence));
      prepared.refs.push_back({d, step, std::move(by_step[step])});
    }
  }
  return prepared;
}

std::vector<ConllSentence> to_conll(const PreparedCorpus& corpus) {
  std::vector<ConllSentence> sentences(corpus.sentences.size());
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto& tagged = corpus.sentences[s];
    ConllSentence sentence(tagged.surfaces.size());
    for (std::size_t k = 0; k < tagged.surfaces.size(); ++k)
      sentence[k] = {tagged.surfaces[k], tagged.tags[k].to_string()};
    sentences[s] = std::move(sentence);
  }
  return sentences;
}

std::vector<ConllSentence> predictions_to_conll(const PreparedCorpus& corpus,
                                                std::span<const TagSequence> predicted) {
  if (predicted.size() != corpus.sentences.size())
    throw error("predictions_to_conll: prediction count mismatch");
  std::vector<ConllSentence> sentences(corpus.sentences.size());
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto& surfaces = corpus.sentences[s].surfaces;
    if (predicted[s].size() != surfaces.size())
      throw error("predictions_to_conll: sentence " + std::to_string(s) + " length mismatch");
    ConllSentence sentence(surfaces.size());
    for (std::size_t k = 0; k < surfaces.size(); ++k)
      sentence[k] = {surfaces[k], predicted[s][k].to_string()};
    sentences[s] = std::move(sentence);
  }
  return sentences;
}

std::map<std::string, std::vector<EntityMention>> predicted_mentions_by_document(
    const PreparedCorpus& corpus, std::span<const TagSequence> predicted) {
  if (predicted.size() != corpus.refs.size())
    throw error("predicted_mentions_by_document: prediction count mismatch");
  std::map<std::string, std::vector<EntityMention>> by_document;
  for (const auto& annotated : corpus.documents()) by_document[annotated.doc.id];
  for (std::size_t s = 0; s < corpus.refs.size(); ++s) {
    const auto& ref = corpus.refs[s];
    const TagSequence repaired = repair_bio(predicted[s]);
    auto mentions = spans_from_tags(repaired, ref.tokens);
    auto& sink = by_document[corpus.documents()[ref.document].doc.id];
    sink.insert(sink.end(), mentions.begin(), mentions.end());
  }
  return by_document;
}

std::map<std::string, std::vector<EntityMention>> gold_mentions_by_document(
    const PreparedCorpus& corpus) {
  std::map<std::string, std::vector<EntityMention>> by_document;
  for (const auto& annotated : corpus.documents())
    by_document[annotated.doc.id] = annotated.mentions;
  return by_document;
}

}  // namespace labner
