#include "labner/alignment.hpp"

#include <algorithm>

#include "labner/error.hpp"

namespace labner {

namespace {

struct TokenRange {
  std::size_t first = 0;  // token indices, inclusive
  std::size_t last = 0;
  bool snapped = false;
};

// Maps a mention's character span to covered token indices, snapping
// mid-token boundaries outward when the policy allows.
TokenRange resolve_range(const EntityMention& mention, std::span<const Token> tokens,
                         BoundaryPolicy policy) {
  TokenRange range;
  bool have_first = false;
  bool have_last = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& token = tokens[i];
    if (!have_first) {
      if (token.start == mention.start) {
        range.first = i;
        have_first = true;
      } else if (token.start < mention.start && mention.start < token.end) {
        if (policy == BoundaryPolicy::Error)
          throw error("mention \"" + mention.surface + "\" starts inside token \"" +
                      token.surface + "\" (use the snap policy to expand it)");
        range.first = i;
        range.snapped = true;
        have_first = true;
      } else if (token.start > mention.start && token.start < mention.end) {
        // start fell into an inter-token gap; snap inward to the next token
        if (policy == BoundaryPolicy::Error)
          throw error("mention \"" + mention.surface + "\" starts between tokens");
        range.first = i;
        range.snapped = true;
        have_first = true;
      }
    }
    if (token.end == mention.end) {
      range.last = i;
      have_last = true;
    } else if (token.start < mention.end && mention.end < token.end) {
      if (policy == BoundaryPolicy::Error)
        throw error("mention \"" + mention.surface + "\" ends inside token \"" + token.surface +
                    "\" (use the snap policy to expand it)");
      range.last = i;
      range.snapped = true;
      have_last = true;
    } else if (have_first && token.end < mention.end && token.end > mention.start) {
      range.last = i;  // provisional; a later token may still match
      if (policy == BoundaryPolicy::Error) have_last = false;
    }
  }
  if (!have_first || range.last < range.first)
    throw error("mention \"" + mention.surface + "\" [" + std::to_string(mention.start) + ", " +
                std::to_string(mention.end) + ") covers no token");
  if (!have_last) {
    if (policy == BoundaryPolicy::Error)
      throw error("mention \"" + mention.surface + "\" ends between tokens");
    range.snapped = true;
  }
  return range;
}

}  // namespace

AlignResult align_mentions_to_tags(std::span<const Token> tokens,
                                   std::span<const EntityMention> mentions,
                                   std::size_t sentence_count, BoundaryPolicy policy) {
  for (std::size_t i = 0; i < mentions.size(); ++i)
    for (std::size_t j = i + 1; j < mentions.size(); ++j)
      if (spans_overlap(mentions[i].start, mentions[i].end, mentions[j].start, mentions[j].end))
        throw error("overlapping mentions \"" + mentions[i].surface + "\" and \"" +
                    mentions[j].surface + "\" cannot be encoded as BIO tags");

  AlignResult result;
  result.sentences.resize(sentence_count);
  std::vector<std::size_t> sentence_of_token(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].sentence_index >= sentence_count)
      throw error("token sentence index out of range");
    sentence_of_token[i] = tokens[i].sentence_index;
    result.sentences[tokens[i].sentence_index].push_back(outside_tag());
  }
  // token index -> position within its sentence
  std::vector<std::size_t> position(tokens.size());
  {
    std::vector<std::size_t> seen(sentence_count, 0);
    for (std::size_t i = 0; i < tokens.size(); ++i) position[i] = seen[sentence_of_token[i]]++;
  }

  std::vector<bool> covered(tokens.size(), false);
  for (const auto& mention : mentions) {
    const TokenRange range = resolve_range(mention, tokens, policy);
    if (range.snapped) ++result.snapped;
    const std::size_t sentence = sentence_of_token[range.first];
    if (sentence_of_token[range.last] != sentence)
      throw error("mention \"" + mention.surface + "\" crosses a sentence boundary");
    for (std::size_t i = range.first; i <= range.last; ++i) {
      if (covered[i])
        throw error("mentions overlap on token \"" + tokens[i].surface + "\" after snapping");
      covered[i] = true;
      result.sentences[sentence][position[i]] =
          i == range.first ? begin_tag(mention.label) : inside_tag(mention.label);
    }
  }
  return result;
}

}  // namespace labner
