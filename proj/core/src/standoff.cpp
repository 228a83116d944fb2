#include "labner/standoff.hpp"

#include <algorithm>
#include <charconv>

#include "labner/conll.hpp"
#include "labner/error.hpp"
#include "labner/utf8.hpp"

namespace labner {

namespace {

std::size_t parse_offset(std::string_view field, const std::string& name, std::size_t line_number) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw parse_error(name, line_number, "malformed offset \"" + std::string(field) + "\"");
  return value;
}

}  // namespace

StandoffDocument parse_standoff(std::string_view txt, std::string_view ann, std::string id) {
  StandoffDocument result;
  result.doc = make_document(std::move(id), std::string(txt));
  const std::u32string text = decode_utf8(result.doc.text);
  const std::string ann_name = result.doc.id + ".ann";

  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < ann.size()) {
    std::size_t eol = ann.find('\n', pos);
    if (eol == std::string_view::npos) eol = ann.size();
    std::string_view line = ann.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (line[0] != 'T') {
      ++result.skipped_annotations;  // relations, events, attributes, notes
      continue;
    }
    const std::size_t tab1 = line.find('\t');
    if (tab1 == std::string_view::npos)
      throw parse_error(ann_name, line_number, "entity line without TAB");
    const std::string_view ann_id = line.substr(0, tab1);
    const std::size_t tab2 = line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos)
      throw parse_error(ann_name, line_number, "entity line without surface field");
    const std::string_view middle = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string_view surface = line.substr(tab2 + 1);

    const std::size_t sp1 = middle.find(' ');
    const std::size_t sp2 = sp1 == std::string_view::npos ? sp1 : middle.find(' ', sp1 + 1);
    if (sp1 == std::string_view::npos || sp2 == std::string_view::npos ||
        middle.find(' ', sp2 + 1) != std::string_view::npos)
      throw parse_error(ann_name, line_number,
                        "expected \"<Type> <start> <end>\", found \"" + std::string(middle) +
                            "\" (discontinuous spans are not supported)");

    EntityMention mention;
    mention.label = std::string(middle.substr(0, sp1));
    if (mention.label.empty()) throw parse_error(ann_name, line_number, "empty entity type");
    mention.start = parse_offset(middle.substr(sp1 + 1, sp2 - sp1 - 1), ann_name, line_number);
    mention.end = parse_offset(middle.substr(sp2 + 1), ann_name, line_number);
    mention.surface = std::string(surface);
    check_mention(mention, text, ann_name + ":" + std::string(ann_id));
    result.mentions.push_back(std::move(mention));
  }
  return result;
}

StandoffDocument read_standoff_pair(const std::filesystem::path& path) {
  std::filesystem::path txt_path = path;
  txt_path.replace_extension(".txt");
  std::filesystem::path ann_path = path;
  ann_path.replace_extension(".ann");
  return parse_standoff(read_text_file(txt_path), read_text_file(ann_path),
                        txt_path.stem().string());
}

std::vector<StandoffDocument> read_standoff_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> txt_files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      txt_files.push_back(entry.path());
  std::sort(txt_files.begin(), txt_files.end());
  std::vector<StandoffDocument> documents;
  documents.reserve(txt_files.size());
  for (const auto& path : txt_files) documents.push_back(read_standoff_pair(path));
  return documents;
}

StandoffOutput write_standoff(const ProtocolDocument& doc, std::span<const EntityMention> mentions,
                              bool allow_overlap) {
  const std::u32string text = decode_utf8(doc.text);
  StandoffOutput out;
  out.txt = doc.text;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const auto& mention = mentions[i];
    check_mention(mention, text, doc.id);
    if (mention.surface.find('\n') != std::string::npos ||
        mention.surface.find('\t') != std::string::npos)
      throw error(doc.id + ": mention surface \"" + mention.surface +
                  "\" contains a newline or TAB; the .ann format cannot represent it");
    if (!allow_overlap) {
      for (std::size_t j = 0; j < i; ++j)
        if (spans_overlap(mention.start, mention.end, mentions[j].start, mentions[j].end))
          throw error(doc.id + ": overlapping mentions \"" + mentions[j].surface + "\" and \"" +
                      mention.surface + "\" (pass allow_overlap to keep them)");
    }
    out.ann += "T" + std::to_string(i + 1) + "\t" + mention.label + " " +
               std::to_string(mention.start) + " " + std::to_string(mention.end) + "\t" +
               mention.surface + "\n";
  }
  return out;
}

void write_standoff_pair(const ProtocolDocument& doc, std::span<const EntityMention> mentions,
                         const std::filesystem::path& dir, bool allow_overlap) {
  const StandoffOutput out = write_standoff(doc, mentions, allow_overlap);
  write_text_file(dir / (doc.id + ".txt"), out.txt);
  write_text_file(dir / (doc.id + ".ann"), out.ann);
}

}  // namespace labner
