#ifndef LABNER_UTF8_HPP
#define LABNER_UTF8_HPP

#include <cstddef>
#include <string>
#include <string_view>

namespace labner {

// All character offsets in this toolkit count Unicode scalar values
// (code points), never bytes. These helpers convert between UTF-8 byte
// strings and code point sequences, rejecting malformed input.

// Decodes UTF-8, throwing parse_error on invalid sequences (overlong
// encodings, surrogates, truncation, out-of-range scalars).
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);

// Number of code points in a valid UTF-8 string.
std::size_t utf8_length(std::string_view text);

// Substring by code point offsets [start, end). Throws error when the
// range does not lie within the text.
std::string utf8_slice(std::string_view text, std::size_t start, std::size_t end);

}  // namespace labner

#endif  // LABNER_UTF8_HPP
