#include "labner/utf8.hpp"

#include "labner/error.hpp"

namespace labner {

namespace {

[[noreturn]] void bad_utf8(std::size_t byte_offset) {
  throw parse_error("invalid UTF-8 at byte offset " + std::to_string(byte_offset));
}

// Decodes one code point starting at byte i, advances i past it.
char32_t decode_one(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const std::size_t at = i;
  const unsigned char b0 = byte(i++);
  if (b0 < 0x80) return b0;

  int continuation = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    continuation = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    continuation = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    continuation = 3;
    cp = b0 & 0x07;
  } else {
    bad_utf8(at);
  }
  for (int k = 0; k < continuation; ++k) {
    if (i >= s.size()) bad_utf8(at);
    const unsigned char b = byte(i++);
    if ((b & 0xC0) != 0x80) bad_utf8(at);
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t min_for_len[4] = {0, 0x80, 0x800, 0x10000};
  if (cp < min_for_len[continuation]) bad_utf8(at);          // overlong
  if (cp >= 0xD800 && cp <= 0xDFFF) bad_utf8(at);            // surrogate
  if (cp > 0x10FFFF) bad_utf8(at);
  return cp;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) out.push_back(decode_one(text, i));
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp >= 0xD800 && cp <= 0xDFFF) throw error("cannot encode surrogate code point");
    if (cp > 0x10FFFF) throw error("code point out of range");
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    decode_one(text, i);
    ++n;
  }
  return n;
}

std::string utf8_slice(std::string_view text, std::size_t start, std::size_t end) {
  if (start > end) throw error("utf8_slice: start > end");
  std::size_t i = 0;
  std::size_t cp = 0;
  std::size_t byte_start = std::string_view::npos;
  while (cp < start && i < text.size()) {
    decode_one(text, i);
    ++cp;
  }
  if (cp < start) throw error("utf8_slice: start out of range");
  byte_start = i;
  while (cp < end && i < text.size()) {
    decode_one(text, i);
    ++cp;
  }
  if (cp < end) throw error("utf8_slice: end out of range");
  return std::string(text.substr(byte_start, i - byte_start));
}

}  // namespace labner
