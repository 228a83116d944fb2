#include "labner/conll.hpp"

#include <fstream>

#include "labner/error.hpp"
#include "labner/utf8.hpp"

namespace labner {

std::vector<ConllSentence> parse_conll(std::string_view content, const std::string& name) {
  decode_utf8(content);  // reject non-UTF-8 input up front

  std::vector<ConllSentence> sentences;
  ConllSentence current;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    if (pos == content.size() && line_number > 0 && content.back() == '\n') break;
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      if (!current.empty()) {
        sentences.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw parse_error(name, line_number, "expected <word>\\t<tag>, found no TAB");
    if (line.find('\t', tab + 1) != std::string_view::npos)
      throw parse_error(name, line_number, "expected exactly one TAB separator");
    std::string_view word = line.substr(0, tab);
    std::string_view tag = line.substr(tab + 1);
    if (word.empty()) throw parse_error(name, line_number, "empty word field");
    if (tag.empty()) throw parse_error(name, line_number, "empty tag field");
    current.push_back({std::string(word), std::string(tag)});
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

std::vector<ConllSentence> read_conll_file(const std::filesystem::path& path) {
  return parse_conll(read_text_file(path), path.string());
}

std::string write_conll(std::span<const ConllSentence> sentences) {
  std::string out;
  const auto check_field = [](const std::string& value, const char* what) {
    if (value.empty())
      throw error(std::string("write_conll: empty ") + what + " cannot be represented");
    if (value.find('\t') != std::string::npos || value.find('\n') != std::string::npos ||
        value.find('\r') != std::string::npos)
      throw error(std::string("write_conll: ") + what + " \"" + value +
                  "\" contains a TAB or newline");
  };
  bool first = true;
  for (const auto& sentence : sentences) {
    if (sentence.empty()) continue;  // a blank line is a separator, not a sentence
    if (!first) out += '\n';
    first = false;
    for (const auto& token : sentence) {
      check_field(token.surface, "word");
      check_field(token.tag, "tag");
      out += token.surface;
      out += '\t';
      out += token.tag;
      out += '\n';
    }
  }
  return out;
}

void write_conll_file(std::span<const ConllSentence> sentences,
                      const std::filesystem::path& path) {
  write_text_file(path, write_conll(sentences));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.starts_with("\xEF\xBB\xBF")) content.erase(0, 3);
  return content;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw error("failed writing " + path.string());
}

}  // namespace labner
