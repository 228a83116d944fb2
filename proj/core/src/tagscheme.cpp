#include "labner/tagscheme.hpp"

#include <algorithm>

#include "labner/error.hpp"

namespace labner {

std::string Tag::to_string() const {
  switch (kind) {
    case TagKind::Outside:
      return "O";
    case TagKind::Begin:
      return "B-" + label;
    case TagKind::Inside:
      return "I-" + label;
  }
  throw error("corrupt tag kind");
}

bool operator<(const Tag& a, const Tag& b) { return a.to_string() < b.to_string(); }

Tag parse_tag(std::string_view text) {
  if (text == "O") return outside_tag();
  if (text.size() >= 2 && (text[0] == 'B' || text[0] == 'I') && text[1] == '-') {
    std::string label(text.substr(2));
    if (label.empty()) throw parse_error("tag \"" + std::string(text) + "\" has an empty label");
    return {text[0] == 'B' ? TagKind::Begin : TagKind::Inside, std::move(label)};
  }
  throw parse_error("malformed tag \"" + std::string(text) +
                    "\" (expected \"O\", \"B-<label>\" or \"I-<label>\")");
}

TagSequence parse_tag_sequence(std::span<const std::string> texts) {
  TagSequence tags;
  tags.reserve(texts.size());
  for (const auto& t : texts) tags.push_back(parse_tag(t));
  return tags;
}

std::vector<BioViolation> validate_bio(const TagSequence& tags) {
  std::vector<BioViolation> violations;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].kind != TagKind::Inside) continue;
    if (i == 0 || tags[i - 1].kind == TagKind::Outside) {
      violations.push_back({i, "I-" + tags[i].label + " without a preceding B/I"});
    } else if (tags[i - 1].label != tags[i].label) {
      violations.push_back({i, "label switch inside I (" + tags[i - 1].label + " -> " +
                                   tags[i].label + ")"});
    }
  }
  return violations;
}

TagSequence repair_bio(const TagSequence& tags, std::size_t* changed) {
  TagSequence repaired = tags;
  std::size_t n_changed = 0;
  for (std::size_t i = 0; i < repaired.size(); ++i) {
    if (repaired[i].kind != TagKind::Inside) continue;
    const bool legal = i > 0 && repaired[i - 1].kind != TagKind::Outside &&
                       repaired[i - 1].label == repaired[i].label;
    if (!legal) {
      repaired[i].kind = TagKind::Begin;
      ++n_changed;
    }
  }
  if (changed) *changed = n_changed;
  return repaired;
}

LabelAlphabet::LabelAlphabet() {
  tags_.push_back(outside_tag());
  index_.emplace("O", 0);
}

LabelAlphabet LabelAlphabet::from_tags(std::span<const Tag> tags) {
  std::vector<Tag> all(tags.begin(), tags.end());
  all.push_back(outside_tag());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  LabelAlphabet alphabet;
  alphabet.tags_ = std::move(all);
  alphabet.index_.clear();
  for (std::size_t i = 0; i < alphabet.tags_.size(); ++i)
    alphabet.index_.emplace(alphabet.tags_[i].to_string(), i);
  return alphabet;
}

LabelAlphabet LabelAlphabet::from_strings(std::span<const std::string> texts) {
  std::vector<Tag> tags;
  tags.reserve(texts.size());
  for (const auto& t : texts) tags.push_back(parse_tag(t));
  return from_tags(tags);
}

std::size_t LabelAlphabet::index_of(const Tag& tag) const {
  auto it = index_.find(tag.to_string());
  if (it == index_.end()) throw error("tag \"" + tag.to_string() + "\" not in alphabet");
  return it->second;
}

std::optional<std::size_t> LabelAlphabet::find(const Tag& tag) const {
  auto it = index_.find(tag.to_string());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<EntityMention> spans_from_tags(const TagSequence& tags,
                                           std::span<const Token> tokens) {
  if (tags.size() != tokens.size())
    throw error("spans_from_tags: " + std::to_string(tags.size()) + " tags for " +
                std::to_string(tokens.size()) + " tokens");
  if (const auto violations = validate_bio(tags); !violations.empty())
    throw error("spans_from_tags: invalid BIO at position " +
                std::to_string(violations.front().position) + ": " +
                violations.front().description + " (repair first)");

  std::vector<EntityMention> mentions;
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i].kind != TagKind::Begin) {
      ++i;
      continue;
    }
    std::size_t last = i;
    while (last + 1 < tags.size() && tags[last + 1].kind == TagKind::Inside) ++last;
    EntityMention mention;
    mention.label = tags[i].label;
    mention.start = tokens[i].start;
    mention.end = tokens[last].end;
    std::string surface = tokens[i].surface;
    for (std::size_t k = i + 1; k <= last; ++k) {
      // Tokens of one sentence never span newlines, so gaps are spaces.
      surface.append(tokens[k].start - tokens[k - 1].end, ' ');
      surface += tokens[k].surface;
    }
    mention.surface = std::move(surface);
    mentions.push_back(std::move(mention));
    i = last + 1;
  }
  return mentions;
}

TagSequence tags_from_spans(std::span<const EntityMention> mentions,
                            std::span<const Token> tokens) {
  TagSequence tags(tokens.size(), outside_tag());
  std::vector<bool> covered(tokens.size(), false);
  for (const auto& mention : mentions) {
    std::size_t first = tokens.size();
    std::size_t last = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].start == mention.start) first = i;
      if (tokens[i].end == mention.end) last = i;
    }
    if (first == tokens.size() || last == tokens.size() || first > last)
      throw error("mention \"" + mention.surface + "\" [" + std::to_string(mention.start) + ", " +
                  std::to_string(mention.end) + ") is not aligned to token boundaries");
    for (std::size_t i = first; i <= last; ++i) {
      if (covered[i])
        throw error("overlapping mentions at token \"" + tokens[i].surface + "\"");
      covered[i] = true;
      tags[i] = i == first ? begin_tag(mention.label) : inside_tag(mention.label);
    }
  }
  return tags;
}

}  // namespace labner
