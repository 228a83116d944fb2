#ifndef LABNER_STANDOFF_HPP
#define LABNER_STANDOFF_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "labner/document.hpp"

namespace labner {

// BRAT standoff: a protocol is a `<id>.txt` / `<id>.ann` pair matched by
// base name. Entity lines have the form
//   T<n>\t<Type> <start> <end>\t<surface>
// with offsets counting Unicode scalar values into the .txt content.
// Relation/event/attribute lines (R, E, A, M, N, #, *) are skipped and
// counted, not parsed.

struct StandoffDocument {
  ProtocolDocument doc;
  std::vector<EntityMention> mentions;     // in .ann file order
  std::size_t skipped_annotations = 0;     // non-entity lines
};

// Throws parse_error on malformed T-lines (with line number) and error
// when an annotation's offsets or surface disagree with the text (naming
// the annotation id).
StandoffDocument parse_standoff(std::string_view txt, std::string_view ann, std::string id);

// Reads `<base>.txt` and its sibling `<base>.ann` (path may point at
// either file). A missing .ann file is an error.
StandoffDocument read_standoff_pair(const std::filesystem::path& path);

// Reads every .txt/.ann pair in a directory, sorted by document id.
std::vector<StandoffDocument> read_standoff_dir(const std::filesystem::path& dir);

struct StandoffOutput {
  std::string txt;
  std::string ann;
};

// Annotation ids are assigned T1..Tn in mention order. Mentions must
// satisfy the EntityMention invariants; overlapping mentions are an
// error unless allow_overlap is set.
StandoffOutput write_standoff(const ProtocolDocument& doc, std::span<const EntityMention> mentions,
                              bool allow_overlap = false);

void write_standoff_pair(const ProtocolDocument& doc, std::span<const EntityMention> mentions,
                         const std::filesystem::path& dir, bool allow_overlap = false);

}  // namespace labner

#endif  // LABNER_STANDOFF_HPP
