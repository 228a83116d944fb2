#include "labner/document.hpp"

#include "labner/error.hpp"
#include "labner/utf8.hpp"

namespace labner {

std::string ProtocolDocument::title() const {
  if (steps.empty()) return "";
  return utf8_slice(text, steps.front().start, steps.front().end);
}

ProtocolDocument make_document(std::string id, std::string text) {
  const std::u32string decoded = decode_utf8(text);  // validates encoding
  ProtocolDocument doc;
  doc.id = std::move(id);
  doc.text = std::move(text);
  std::size_t line_start = 0;
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    if (decoded[i] == U'\n') {
      doc.steps.push_back({line_start, i});
      line_start = i + 1;
    }
  }
  if (line_start < decoded.size()) doc.steps.push_back({line_start, decoded.size()});
  return doc;
}

void check_mention(const EntityMention& mention, const std::u32string& text,
                   const std::string& context) {
  if (mention.start >= mention.end)
    throw error(context + ": mention has empty or inverted span [" +
                std::to_string(mention.start) + ", " + std::to_string(mention.end) + ")");
  if (mention.end > text.size())
    throw error(context + ": mention span [" + std::to_string(mention.start) + ", " +
                std::to_string(mention.end) + ") exceeds text length " +
                std::to_string(text.size()));
  const std::string slice =
      encode_utf8(std::u32string_view(text).substr(mention.start, mention.end - mention.start));
  if (slice != mention.surface)
    throw error(context + ": surface \"" + mention.surface + "\" does not match text slice \"" +
                slice + "\" at [" + std::to_string(mention.start) + ", " +
                std::to_string(mention.end) + ")");
}

}  // namespace labner
