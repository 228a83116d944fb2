#ifndef LABNER_TOKENIZER_HPP
#define LABNER_TOKENIZER_HPP

#include <vector>

#include "labner/document.hpp"

namespace labner {

// Deterministic rule-based tokenizer. One sentence per protocol step
// (line). Within a line:
//   - runs of word characters form one token;
//   - '.' and ',' stay inside a token when immediately between two ASCII
//     digits ("3.68" is one token);
//   - every other non-whitespace, non-word character is a single-char
//     token ("37°C." -> "37", "°", "C", ".").
// Word characters: ASCII alphanumerics and code points >= U+00C0.
// Whitespace: ASCII whitespace and U+00A0.
//
// Tokens cover all non-whitespace characters; concatenating surfaces
// with the original gaps reconstructs each line.
std::vector<Token> tokenize(const ProtocolDocument& doc);

bool is_word_char(char32_t cp);
bool is_whitespace_char(char32_t cp);

}  // namespace labner

#endif  // LABNER_TOKENIZER_HPP
