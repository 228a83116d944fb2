#ifndef LABNER_TESTS_GENERATORS_HPP
#define LABNER_TESTS_GENERATORS_HPP

// Deterministic random-instance generators shared by the unit and
// acceptance suites. Everything is seeded mt19937_64; no global state.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "labner/conll.hpp"
#include "labner/document.hpp"
#include "labner/ensemble.hpp"
#include "labner/standoff.hpp"
#include "labner/tagger.hpp"
#include "labner/tagscheme.hpp"

namespace labner::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

template <typename T>
const T& choose(Rng& rng, const std::vector<T>& items) {
  return items[pick(rng, items.size())];
}

// ---------------------------------------------------------------------
// Random CoNLL corpora (round-trip properties)

inline std::string random_surface(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "put",  "NaCl",  "3.68", "ml",   "°C",   "heat", "mix",  "(",    ")",
      ".",    ",",     "37",   "tube", "à",    "pH",   "x10",  "-",    "buffer"};
  std::string surface = choose(rng, pieces);
  if (pick(rng, 4) == 0) surface += choose(rng, pieces);
  return surface;
}

inline std::string random_tag_text(Rng& rng) {
  static const std::vector<std::string> tags = {"O",        "B-Action",  "I-Action",
                                                "B-Reagent", "I-Reagent", "B-Measure-Type"};
  return choose(rng, tags);
}

inline std::vector<ConllSentence> random_conll_corpus(Rng& rng) {
  std::vector<ConllSentence> corpus(1 + pick(rng, 6));
  for (auto& sentence : corpus) {
    sentence.resize(1 + pick(rng, 8));
    for (auto& token : sentence) token = {random_surface(rng), random_tag_text(rng)};
  }
  return corpus;
}

// ---------------------------------------------------------------------
// Random tag sequences and prediction sets (merging properties)

inline LabelAlphabet random_alphabet(Rng& rng, std::size_t size) {
  static const std::vector<std::string> pool = {"B-Action", "I-Action", "B-Reagent",
                                                "I-Reagent", "B-Amount", "I-Amount"};
  std::vector<std::string> tags = {"O"};
  std::vector<std::string> shuffled = pool;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i)
    std::swap(shuffled[i], shuffled[pick(rng, i + 1)]);
  for (std::size_t i = 0; i + 1 < size && i < shuffled.size(); ++i) tags.push_back(shuffled[i]);
  return LabelAlphabet::from_strings(tags);
}

inline PredictionSet random_prediction_set(Rng& rng, std::size_t n_labels, std::size_t length,
                                           std::size_t n_models) {
  LabelAlphabet alphabet = random_alphabet(rng, n_labels);
  std::vector<TagSequence> sequences(n_models);
  for (auto& sequence : sequences) {
    sequence.resize(length);
    for (auto& tag : sequence) tag = alphabet.tag(pick(rng, alphabet.size()));
  }
  return make_prediction_set(0, std::move(alphabet), sequences);
}

// A random valid BIO sequence over the given entity labels.
inline TagSequence random_valid_bio(Rng& rng, const std::vector<std::string>& labels,
                                    std::size_t length) {
  TagSequence tags;
  tags.reserve(length);
  std::size_t i = 0;
  while (i < length) {
    if (pick(rng, 2) == 0) {
      tags.push_back(outside_tag());
      ++i;
    } else {
      const std::string& label = choose(rng, labels);
      const std::size_t run = std::min(length - i, std::size_t(1) + pick(rng, 3));
      tags.push_back(begin_tag(label));
      for (std::size_t k = 1; k < run; ++k) tags.push_back(inside_tag(label));
      i += run;
    }
  }
  return tags;
}

// ---------------------------------------------------------------------
// Random mention sets (metric properties)

inline std::vector<EntityMention> random_mention_set(Rng& rng, std::size_t text_length,
                                                     const std::vector<std::string>& labels) {
  std::vector<EntityMention> mentions;
  std::size_t cursor = pick(rng, 4);
  while (cursor + 1 < text_length) {
    const std::size_t span = 1 + pick(rng, 5);
    const std::size_t end = std::min(text_length, cursor + span);
    if (pick(rng, 3) != 0) {
      EntityMention mention;
      mention.label = choose(rng, labels);
      mention.start = cursor;
      mention.end = end;
      mention.surface = std::string(end - cursor, 'x');
      mentions.push_back(std::move(mention));
    }
    cursor = end + pick(rng, 4);
  }
  return mentions;
}

// ---------------------------------------------------------------------
// Synthetic lab-protocol corpora for the tagger and the pipeline.
//
// Surfaces are drawn from disjoint pools so each maps to exactly one tag
// (separable). With `ambiguous`, a few extra surfaces take a tag that
// depends on the preceding word, and one rare reagent appears in few
// documents, so models trained on different splits genuinely disagree.

struct SyntheticConfig {
  std::uint64_t seed = 1;
  std::size_t n_documents = 20;
  std::size_t steps_per_document = 6;
  bool ambiguous = false;
};

namespace detail {

struct TokenDraw {
  std::string surface;
  Tag tag;
};

inline void append_entity(Rng& rng, std::vector<TokenDraw>& out, const std::string& label,
                          const std::vector<std::string>& heads,
                          const std::vector<std::string>& tails, std::size_t max_tail) {
  out.push_back({choose(rng, heads), begin_tag(label)});
  const std::size_t n_tail = pick(rng, max_tail + 1);
  for (std::size_t i = 0; i < n_tail; ++i) out.push_back({choose(rng, tails), inside_tag(label)});
}

inline std::vector<TokenDraw> synthetic_sentence(Rng& rng, bool ambiguous,
                                                 std::size_t rare_salt) {
  static const std::vector<std::string> actions = {"add",  "heat",  "spin", "wash",
                                                   "cool", "shake", "stir", "pour"};
  static const std::vector<std::string> reagent_heads = {"nacl",    "ethanol",  "agarose",
                                                         "trypsin", "glycerol", "peptone"};
  static const std::vector<std::string> reagent_tails = {"solution", "stock", "powder"};
  static const std::vector<std::string> numbers = {"2", "5", "10", "25", "50", "3.5", "120"};
  static const std::vector<std::string> units = {"ml", "mg", "liters", "grams"};
  static const std::vector<std::string> device_heads = {"centrifuge", "incubator", "vortexer",
                                                        "freezer"};
  static const std::vector<std::string> device_tails = {"chamber", "rotor"};
  static const std::vector<std::string> fillers = {"the",    "into", "with", "for",
                                                   "gently", "then", "at"};

  const auto reagent = [&](std::vector<TokenDraw>& sink) {
    if (ambiguous && pick(rng, 3) == 0) {
      // Rare reagents occur in very few documents, so taggers trained on
      // splits missing them genuinely disagree at test time.
      sink.push_back({"rare" + std::to_string(rare_salt % 23), begin_tag("Reagent")});
      if (pick(rng, 2) == 0) sink.push_back({choose(rng, reagent_tails), inside_tag("Reagent")});
    } else {
      append_entity(rng, sink, "Reagent", reagent_heads, reagent_tails, 2);
    }
  };

  std::vector<TokenDraw> out;
  out.push_back({choose(rng, actions), begin_tag("Action")});
  out.push_back({choose(rng, fillers), outside_tag()});
  reagent(out);
  if (ambiguous && pick(rng, 3) == 0) {
    out.push_back({"and", outside_tag()});
    reagent(out);
  }
  if (pick(rng, 2) == 0) {
    out.push_back({choose(rng, fillers), outside_tag()});
    out.push_back({choose(rng, numbers), begin_tag("Amount")});
    out.push_back({choose(rng, units), inside_tag("Amount")});
  }
  if (pick(rng, 2) == 0) {
    out.push_back({choose(rng, fillers), outside_tag()});
    append_entity(rng, out, "Device", device_heads, device_tails, 1);
  }
  if (ambiguous && pick(rng, 4) == 0) {
    // "press" is a Device after "the", an Action after "then".
    if (pick(rng, 2) == 0) {
      out.push_back({"the", outside_tag()});
      out.push_back({"press", begin_tag("Device")});
    } else {
      out.push_back({"then", outside_tag()});
      out.push_back({"press", begin_tag("Action")});
    }
  }
  out.push_back({".", outside_tag()});
  return out;
}

}  // namespace detail

inline TaggedSentence to_tagged(const std::vector<detail::TokenDraw>& draws) {
  TaggedSentence sentence;
  for (const auto& draw : draws) {
    sentence.surfaces.push_back(draw.surface);
    sentence.tags.push_back(draw.tag);
  }
  return sentence;
}

// Flat separable sentences (no documents) for tagger sanity checks.
inline std::vector<TaggedSentence> synthetic_sentences(std::uint64_t seed, std::size_t count,
                                                       bool ambiguous = false) {
  Rng rng(seed);
  std::vector<TaggedSentence> sentences;
  sentences.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    sentences.push_back(to_tagged(detail::synthetic_sentence(rng, ambiguous, i)));
  return sentences;
}

// Full standoff documents: a title line plus annotated steps.
inline std::vector<StandoffDocument> synthetic_standoff_corpus(const SyntheticConfig& config) {
  Rng rng(config.seed);
  std::vector<StandoffDocument> documents;
  for (std::size_t d = 0; d < config.n_documents; ++d) {
    std::string text = "protocol " + std::to_string(d + 1) + " setup";
    std::vector<EntityMention> mentions;
    for (std::size_t step = 0; step < config.steps_per_document; ++step) {
      text += '\n';
      const auto draws = detail::synthetic_sentence(rng, config.ambiguous, d);
      for (std::size_t k = 0; k < draws.size(); ++k) {
        if (k > 0) text += ' ';
        const std::size_t start = text.size();  // ASCII corpus: bytes == code points
        text += draws[k].surface;
        if (draws[k].tag.kind == TagKind::Begin) {
          mentions.push_back(
              {draws[k].tag.label, start, text.size(), draws[k].surface});
        } else if (draws[k].tag.kind == TagKind::Inside) {
          mentions.back().end = text.size();
          mentions.back().surface += ' ' + draws[k].surface;
        }
      }
    }
    char name[16];
    std::snprintf(name, sizeof name, "protocol_%03zu", d + 1);
    StandoffDocument standoff;
    standoff.doc = make_document(name, text + "\n");
    standoff.mentions = std::move(mentions);
    documents.push_back(std::move(standoff));
  }
  return documents;
}

inline void write_corpus_dir(const std::vector<StandoffDocument>& documents,
                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& standoff : documents)
    write_standoff_pair(standoff.doc, standoff.mentions, dir);
}

// Random tagger models with integer weights: sums of path scores are
// exact in double, so decode-vs-enumeration comparisons can use ==.
inline TaggerModel random_integer_model(Rng& rng, std::size_t n_labels, bool enforce_bio) {
  const LabelAlphabet alphabet = random_alphabet(rng, n_labels);
  std::vector<std::string> features;
  for (std::size_t i = 0; i < 6; ++i) features.push_back("w=tok" + std::to_string(i));
  TaggerModel model(alphabet, features, 1, enforce_bio);
  for (double& w : model.emission_weights()) w = static_cast<double>(rng() % 17) - 8.0;
  for (double& w : model.transition_weights()) w = static_cast<double>(rng() % 17) - 8.0;
  return model;
}

}  // namespace labner::testing

#endif  // LABNER_TESTS_GENERATORS_HPP
