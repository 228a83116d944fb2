#ifndef LABNER_TAGSCHEME_HPP
#define LABNER_TAGSCHEME_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "labner/document.hpp"

namespace labner {

enum class TagKind { Outside, Begin, Inside };

// A BIO tag: "O", "B-<label>", or "I-<label>". Labels may themselves
// contain hyphens ("B-Measure-Type"), so parsing splits on the first one.
struct Tag {
  TagKind kind = TagKind::Outside;
  std::string label;  // empty for Outside

  std::string to_string() const;
  bool operator==(const Tag&) const = default;
};

// Textual-form ordering; the toolkit-wide tie-break order.
bool operator<(const Tag& a, const Tag& b);

inline Tag outside_tag() { return Tag{}; }
inline Tag begin_tag(std::string label) { return {TagKind::Begin, std::move(label)}; }
inline Tag inside_tag(std::string label) { return {TagKind::Inside, std::move(label)}; }

// Throws parse_error on anything other than "O", "B-<label>", "I-<label>"
// with a non-empty label.
Tag parse_tag(std::string_view text);

// Per-token tags of one sentence. Sequences are allowed to be invalid
// BIO (merging can produce them); validity is a checkable predicate.
using TagSequence = std::vector<Tag>;

TagSequence parse_tag_sequence(std::span<const std::string> texts);

struct BioViolation {
  std::size_t position = 0;
  std::string description;
};

// Empty result iff every I-X continues a B-X or I-X of the same label.
std::vector<BioViolation> validate_bio(const TagSequence& tags);

// Rewrites every illegal I-X as B-X (left to right). Idempotent; identity
// on valid sequences. `changed`, when given, receives the number of
// rewritten positions.
TagSequence repair_bio(const TagSequence& tags, std::size_t* changed = nullptr);

// The ordered set of all tags in play. Ordering is the lexicographic sort
// of the textual forms, frozen at construction; index 0 is the first tag
// in that order. Always contains O.
class LabelAlphabet {
public:
  LabelAlphabet();  // just {O}

  static LabelAlphabet from_tags(std::span<const Tag> tags);
  static LabelAlphabet from_strings(std::span<const std::string> texts);

  std::size_t size() const { return tags_.size(); }
  const Tag& tag(std::size_t index) const { return tags_[index]; }
  const std::vector<Tag>& tags() const { return tags_; }

  // Throws error when the tag is not a member.
  std::size_t index_of(const Tag& tag) const;
  std::optional<std::size_t> find(const Tag& tag) const;

  bool operator==(const LabelAlphabet&) const = default;

private:
  std::vector<Tag> tags_;  // sorted by textual form, unique
  std::unordered_map<std::string, std::size_t> index_;
};

// Converts a valid BIO sequence into mentions: each maximal B-X (I-X)*
// run becomes one mention spanning from the first token's start to the
// last token's end. Throws error on invalid BIO or length mismatch.
std::vector<EntityMention> spans_from_tags(const TagSequence& tags, std::span<const Token> tokens);

// Exact inverse of spans_from_tags for token-aligned, non-overlapping
// mentions; throws error when a mention boundary is not a token boundary
// or mentions overlap.
TagSequence tags_from_spans(std::span<const EntityMention> mentions, std::span<const Token> tokens);

}  // namespace labner

#endif  // LABNER_TAGSCHEME_HPP
