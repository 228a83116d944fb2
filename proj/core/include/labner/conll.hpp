#ifndef LABNER_CONLL_HPP
#define LABNER_CONLL_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace labner {

// CoNLL column format: one `<word>\t<tag>` line per token, a blank line
// between sentences, UTF-8 throughout. LF endings on write, CRLF
// tolerated on read.
struct ConllToken {
  std::string surface;
  std::string tag;

  bool operator==(const ConllToken&) const = default;
};

using ConllSentence = std::vector<ConllToken>;

// Splits sentences on blank lines; consecutive or trailing blank lines
// are ignored. Throws parse_error (with line number, prefixed by `name`)
// on lines without exactly one TAB or with an empty word/tag field.
// An empty input yields an empty corpus.
std::vector<ConllSentence> parse_conll(std::string_view content, const std::string& name = "");

std::vector<ConllSentence> read_conll_file(const std::filesystem::path& path);

// Exact inverse of parse_conll on its output: single blank line between
// sentences, final newline after the last token line. Throws error on
// surfaces or tags the format cannot represent (empty, or containing a
// TAB or newline).
std::string write_conll(std::span<const ConllSentence> sentences);

void write_conll_file(std::span<const ConllSentence> sentences, const std::filesystem::path& path);

// Reads a whole file, stripping one leading UTF-8 BOM when present.
std::string read_text_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace labner

#endif  // LABNER_CONLL_HPP
