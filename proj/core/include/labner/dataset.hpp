#ifndef LABNER_DATASET_HPP
#define LABNER_DATASET_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "labner/alignment.hpp"
#include "labner/conll.hpp"
#include "labner/standoff.hpp"
#include "labner/tagger.hpp"

namespace labner {

// A standoff corpus tokenized and projected to BIO, flattened to the
// non-empty sentences in document order. Each AnnotatedDocument carries
// its full token list; `refs` parallels `sentences` and keeps the
// per-sentence tokens for mapping tags back to character offsets.
struct SentenceRef {
  std::size_t document = 0;  // index into corpus.documents
  std::size_t step = 0;      // sentence index inside the document
  std::vector<Token> tokens;
};

struct PreparedCorpus {
  AnnotatedCorpus corpus;
  std::vector<TaggedSentence> sentences;
  std::vector<SentenceRef> refs;
  std::size_t snapped = 0;

  const std::vector<AnnotatedDocument>& documents() const { return corpus.documents; }
};

PreparedCorpus prepare_corpus(std::vector<StandoffDocument> documents,
                              BoundaryPolicy policy = BoundaryPolicy::Error);

// Gold CoNLL view of the prepared corpus.
std::vector<ConllSentence> to_conll(const PreparedCorpus& corpus);

// The same sentences with predicted tags substituted.
std::vector<ConllSentence> predictions_to_conll(const PreparedCorpus& corpus,
                                                std::span<const TagSequence> predicted);

// Character-offset mentions per document id. Predictions are repaired
// before span extraction; gold comes straight from the standoff files.
std::map<std::string, std::vector<EntityMention>> predicted_mentions_by_document(
    const PreparedCorpus& corpus, std::span<const TagSequence> predicted);
std::map<std::string, std::vector<EntityMention>> gold_mentions_by_document(
    const PreparedCorpus& corpus);

}  // namespace labner

#endif  // LABNER_DATASET_HPP
