#include "labner/tokenizer.hpp"

#include "labner/utf8.hpp"

namespace labner {

bool is_word_char(char32_t cp) {
  if (cp < 0x80)
    return (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z');
  return cp >= 0xC0;  // Latin-1 letters and beyond; U+0080..U+00BF are symbols
}

bool is_whitespace_char(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v' ||
         cp == 0xA0;
}

namespace {

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

// '.' or ',' inside a number, e.g. "3.68".
bool is_decimal_separator(const std::u32string& text, std::size_t i) {
  if (text[i] != U'.' && text[i] != U',') return false;
  return i > 0 && i + 1 < text.size() && is_ascii_digit(text[i - 1]) && is_ascii_digit(text[i + 1]);
}

}  // namespace

std::vector<Token> tokenize(const ProtocolDocument& doc) {
  const std::u32string text = decode_utf8(doc.text);
  std::vector<Token> tokens;
  for (std::size_t step = 0; step < doc.steps.size(); ++step) {
    const auto [line_start, line_end] = doc.steps[step];
    std::size_t i = line_start;
    while (i < line_end) {
      if (is_whitespace_char(text[i])) {
        ++i;
        continue;
      }
      std::size_t start = i;
      if (is_word_char(text[i])) {
        while (i < line_end &&
               (is_word_char(text[i]) || is_decimal_separator(text, i)))
          ++i;
      } else {
        ++i;  // single-character separator token
      }
      Token token;
      token.start = start;
      token.end = i;
      token.sentence_index = step;
      token.surface = encode_utf8(std::u32string_view(text).substr(start, i - start));
      tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

}  // namespace labner
