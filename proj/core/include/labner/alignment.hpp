#ifndef LABNER_ALIGNMENT_HPP
#define LABNER_ALIGNMENT_HPP

#include <span>
#include <vector>

#include "labner/document.hpp"
#include "labner/tagscheme.hpp"

namespace labner {

// What to do with a mention whose boundary falls strictly inside a token.
enum class BoundaryPolicy {
  Error,        // reject the document
  SnapOutward,  // expand to the enclosing token boundaries, counting it
};

struct AlignResult {
  std::vector<TagSequence> sentences;  // one per step, aligned with sentence_count
  std::size_t snapped = 0;
};

// Projects character-offset mentions onto BIO tag sequences, one per
// sentence: B-label on the first covered token, I-label on the rest,
// O elsewhere. Mentions must be non-overlapping (after snapping) and
// must not cross sentence boundaries.
AlignResult align_mentions_to_tags(std::span<const Token> tokens,
                                   std::span<const EntityMention> mentions,
                                   std::size_t sentence_count,
                                   BoundaryPolicy policy = BoundaryPolicy::Error);

}  // namespace labner

#endif  // LABNER_ALIGNMENT_HPP
