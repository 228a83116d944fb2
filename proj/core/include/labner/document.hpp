#ifndef LABNER_DOCUMENT_HPP
#define LABNER_DOCUMENT_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace labner {

// A typed character span inside one document. Offsets count Unicode
// scalar values, are 0-indexed, start-inclusive and end-exclusive, and
// `surface` always equals the exact text slice [start, end).
struct EntityMention {
  std::string label;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  bool operator==(const EntityMention&) const = default;
};

// One token of a tokenized document. Offsets are document-wide code
// point offsets; `sentence_index` is the protocol step the token lies in.
struct Token {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t sentence_index = 0;

  bool operator==(const Token&) const = default;
};

// Half-open code point span of one line of a document.
struct LineSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const LineSpan&) const = default;
};

// One protocol: UTF-8 text whose lines are the protocol steps. The first
// line is the protocol title.
struct ProtocolDocument {
  std::string id;    // base filename without extension
  std::string text;  // UTF-8
  std::vector<LineSpan> steps;

  std::string title() const;

  bool operator==(const ProtocolDocument&) const = default;
};

// Builds a document from raw text: validates UTF-8 and derives the step
// spans (one per line, final newline producing no empty trailing step).
ProtocolDocument make_document(std::string id, std::string text);

// Checks the EntityMention invariants against the document text
// (0 <= start < end <= length, surface equals the slice). Throws error
// naming `context` on violation.
void check_mention(const EntityMention& mention, const std::u32string& text,
                   const std::string& context);

// True when two half-open ranges share at least one position.
inline bool spans_overlap(std::size_t a_start, std::size_t a_end, std::size_t b_start,
                          std::size_t b_end) {
  return a_start < b_end && b_start < a_end;
}

struct AnnotatedDocument {
  ProtocolDocument doc;
  std::vector<EntityMention> mentions;
  std::vector<Token> tokens;  // populated after tokenization
};

struct AnnotatedCorpus {
  std::vector<AnnotatedDocument> documents;
};

}  // namespace labner

#endif  // LABNER_DOCUMENT_HPP
