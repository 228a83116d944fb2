#include "labner/features.hpp"

#include "labner/utf8.hpp"

namespace labner {

namespace {

// ASCII-only lowercasing keeps the mapping deterministic and locale-free.
std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

char shape_class(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return 'X';
  if (cp >= U'a' && cp <= U'z') return 'x';
  if (cp >= U'0' && cp <= U'9') return 'd';
  return 'o';
}

std::string word_shape(const std::u32string& surface) {
  std::string shape;
  for (char32_t cp : surface) {
    const char c = shape_class(cp);
    if (shape.empty() || shape.back() != c) shape.push_back(c);
  }
  return shape;
}

bool all_ascii_digits(const std::u32string& surface) {
  if (surface.empty()) return false;
  for (char32_t cp : surface)
    if (cp < U'0' || cp > U'9') return false;
  return true;
}

bool is_titlecase(const std::u32string& surface) {
  if (surface.empty()) return false;
  if (surface[0] < U'A' || surface[0] > U'Z') return false;
  for (std::size_t i = 1; i < surface.size(); ++i)
    if (surface[i] >= U'A' && surface[i] <= U'Z') return false;
  return true;
}

}  // namespace

std::vector<std::string> FeatureExtractor::extract(std::span<const std::string> surfaces,
                                                   std::size_t position) const {
  const std::string& raw = surfaces[position];
  const std::u32string decoded = decode_utf8(raw);
  const std::string lowered = lower_ascii(raw);

  std::vector<std::string> features;
  features.reserve(12 + 2 * window_);
  features.push_back("w=" + lowered);
  features.push_back("shape=" + word_shape(decoded));
  const std::u32string lowered_cp = decode_utf8(lowered);
  for (std::size_t n = 1; n <= 4 && n <= lowered_cp.size(); ++n) {
    features.push_back("pre" + std::to_string(n) + "=" + encode_utf8(lowered_cp.substr(0, n)));
    features.push_back("suf" + std::to_string(n) + "=" +
                       encode_utf8(lowered_cp.substr(lowered_cp.size() - n)));
  }
  if (all_ascii_digits(decoded)) features.push_back("digits");
  if (is_titlecase(decoded)) features.push_back("title");
  for (std::size_t d = 1; d <= window_; ++d) {
    features.push_back("w[-" + std::to_string(d) + "]=" +
                       (position >= d ? lower_ascii(surfaces[position - d]) : "<s>"));
    features.push_back("w[+" + std::to_string(d) + "]=" +
                       (position + d < surfaces.size() ? lower_ascii(surfaces[position + d])
                                                       : "</s>"));
  }
  return features;
}

}  // namespace labner
