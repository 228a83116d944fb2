// labner -- entity-recognition toolkit for lab-protocol corpora.
//
// Subcommands: convert, stats, split, train, tag, merge, eval, pipeline.
// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 internal
// invariant violation.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "labner/dataset.hpp"
#include "labner/ensemble.hpp"
#include "labner/error.hpp"
#include "labner/eval.hpp"
#include "labner/pipeline.hpp"
#include "labner/split.hpp"
#include "labner/stats.hpp"
#include "labner/tokenizer.hpp"

namespace fs = std::filesystem;
using namespace labner;

namespace {

// Inputs for corpus-level commands, in either format. Each CoNLL file or
// standoff pair counts as one protocol.
struct LoadedCorpus {
  std::vector<ConllSentence> sentences;
  std::size_t protocols = 0;
  std::optional<PreparedCorpus> prepared;  // standoff only
};

std::vector<fs::path> expand_standoff_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    const fs::path path(input);
    if (fs::is_directory(path)) {
      for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
          files.push_back(entry.path());
    } else {
      files.push_back(path);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

LoadedCorpus load_corpus(const std::vector<std::string>& inputs, const std::string& format,
                         BoundaryPolicy policy) {
  LoadedCorpus corpus;
  if (format == "conll") {
    for (const auto& input : inputs) {
      auto sentences = read_conll_file(input);
      corpus.sentences.insert(corpus.sentences.end(), sentences.begin(), sentences.end());
      ++corpus.protocols;
    }
  } else if (format == "standoff") {
    std::vector<StandoffDocument> documents;
    for (const auto& path : expand_standoff_inputs(inputs))
      documents.push_back(read_standoff_pair(path));
    corpus.prepared = prepare_corpus(std::move(documents), policy);
    corpus.sentences = to_conll(*corpus.prepared);
    corpus.protocols = corpus.prepared->documents().size();
  } else {
    throw CLI::ValidationError("--format", "expected conll or standoff");
  }
  return corpus;
}

void write_or_print(const std::optional<std::string>& out, const std::string& content) {
  if (out)
    write_text_file(*out, content);
  else
    std::cout << content;
}

// Token-granularity mention maps from aligned CoNLL corpora: each
// sentence becomes one "document" keyed by its index, with token indices
// as offsets.
std::map<std::string, std::vector<EntityMention>> conll_mentions(
    std::span<const ConllSentence> sentences) {
  std::map<std::string, std::vector<EntityMention>> by_document;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    std::vector<Token> tokens(sentences[s].size());
    std::vector<std::string> tags(sentences[s].size());
    for (std::size_t k = 0; k < sentences[s].size(); ++k) {
      tokens[k] = {sentences[s][k].surface, k, k + 1, 0};
      tags[k] = sentences[s][k].tag;
    }
    const TagSequence repaired = repair_bio(parse_tag_sequence(tags));
    by_document[std::to_string(s)] = spans_from_tags(repaired, tokens);
  }
  return by_document;
}

std::vector<TagSequence> conll_tags(std::span<const ConllSentence> sentences) {
  std::vector<TagSequence> tags(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    std::vector<std::string> texts(sentences[s].size());
    for (std::size_t k = 0; k < sentences[s].size(); ++k) texts[k] = sentences[s][k].tag;
    tags[s] = parse_tag_sequence(texts);
  }
  return tags;
}

int cmd_convert(const std::string& from, const std::string& to,
                const std::vector<std::string>& inputs, const fs::path& out_dir,
                const std::optional<std::string>& text_dir, bool snap, bool allow_overlap) {
  fs::create_directories(out_dir);
  const BoundaryPolicy policy = snap ? BoundaryPolicy::SnapOutward : BoundaryPolicy::Error;
  if (from == "standoff" && to == "conll") {
    for (const auto& path : expand_standoff_inputs(inputs)) {
      StandoffDocument standoff = read_standoff_pair(path);
      if (standoff.skipped_annotations > 0)
        std::cerr << "labner: " << standoff.doc.id << ": skipped "
                  << standoff.skipped_annotations << " non-entity annotation line(s)\n";
      PreparedCorpus prepared = prepare_corpus({std::move(standoff)}, policy);
      if (prepared.snapped > 0)
        std::cerr << "labner: " << prepared.documents().front().doc.id << ": snapped "
                  << prepared.snapped << " mention boundary(ies) to token boundaries\n";
      write_conll_file(to_conll(prepared),
                       out_dir / (prepared.documents().front().doc.id + ".conll"));
    }
    return 0;
  }
  if (from == "conll" && to == "standoff") {
    for (const auto& input : inputs) {
      const fs::path conll_path(input);
      const std::string id = conll_path.stem().string();
      const fs::path txt_path =
          text_dir ? fs::path(*text_dir) / (id + ".txt")
                   : fs::path(conll_path).replace_extension(".txt");
      const ProtocolDocument doc = make_document(id, read_text_file(txt_path));
      const std::vector<Token> tokens = tokenize(doc);
      const auto sentences = read_conll_file(conll_path);

      // Re-align the CoNLL rows with the tokenized text, then lift the
      // tags back to character offsets.
      std::vector<std::vector<Token>> by_step(doc.steps.size());
      for (const Token& token : tokens) by_step[token.sentence_index].push_back(token);
      std::vector<EntityMention> mentions;
      std::size_t s = 0;
      for (const auto& step_tokens : by_step) {
        if (step_tokens.empty()) continue;
        if (s >= sentences.size())
          throw error(id + ": .txt has more sentences than the CoNLL file");
        const auto& sentence = sentences[s];
        if (sentence.size() != step_tokens.size())
          throw error(id + ": sentence " + std::to_string(s) + " has " +
                      std::to_string(sentence.size()) + " CoNLL rows but " +
                      std::to_string(step_tokens.size()) + " tokens in the text");
        std::vector<std::string> tags(sentence.size());
        for (std::size_t k = 0; k < sentence.size(); ++k) {
          if (sentence[k].surface != step_tokens[k].surface)
            throw error(id + ": sentence " + std::to_string(s) + ", token " + std::to_string(k) +
                        ": CoNLL surface \"" + sentence[k].surface +
                        "\" does not match text token \"" + step_tokens[k].surface + "\"");
          tags[k] = sentence[k].tag;
        }
        auto sentence_mentions = spans_from_tags(parse_tag_sequence(tags), step_tokens);
        mentions.insert(mentions.end(), sentence_mentions.begin(), sentence_mentions.end());
        ++s;
      }
      if (s != sentences.size())
        throw error(id + ": CoNLL file has more sentences than the .txt");
      write_standoff_pair(doc, mentions, out_dir, allow_overlap);
    }
    return 0;
  }
  throw CLI::ValidationError("convert", "unsupported conversion " + from + " -> " + to);
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& format, const std::string& criterion, std::size_t confusions,
             bool table, bool max_matching, const std::optional<std::string>& out) {
  std::map<std::string, std::vector<EntityMention>> gold;
  std::map<std::string, std::vector<EntityMention>> predicted;
  std::vector<TagSequence> gold_tags;
  std::vector<TagSequence> pred_tags;
  bool have_tags = false;

  if (format == "conll") {
    const auto gold_sentences = read_conll_file(gold_path);
    const auto pred_sentences = read_conll_file(pred_path);
    gold = conll_mentions(gold_sentences);
    predicted = conll_mentions(pred_sentences);
    gold_tags = conll_tags(gold_sentences);
    pred_tags = conll_tags(pred_sentences);
    have_tags = true;
  } else if (format == "standoff") {
    PreparedCorpus gold_corpus = prepare_corpus(
        [&] {
          std::vector<StandoffDocument> docs;
          for (const auto& path : expand_standoff_inputs({gold_path}))
            docs.push_back(read_standoff_pair(path));
          return docs;
        }(),
        BoundaryPolicy::Error);
    gold = gold_mentions_by_document(gold_corpus);
    std::vector<StandoffDocument> pred_docs;
    for (const auto& path : expand_standoff_inputs({pred_path}))
      pred_docs.push_back(read_standoff_pair(path));
    for (const auto& standoff : pred_docs) predicted[standoff.doc.id] = standoff.mentions;
    if (confusions > 0) {
      PreparedCorpus pred_corpus = prepare_corpus(std::move(pred_docs), BoundaryPolicy::Error);
      for (const auto& sentence : gold_corpus.sentences) gold_tags.push_back(sentence.tags);
      for (const auto& sentence : pred_corpus.sentences) pred_tags.push_back(sentence.tags);
      have_tags = true;
    }
  } else {
    throw CLI::ValidationError("--format", "expected conll or standoff");
  }

  nlohmann::ordered_json output;
  std::string rendered;
  const auto run = [&](MatchCriterion c) {
    const ScoreReport report = score_mentions(predicted, gold, c, max_matching);
    output[criterion_name(c)] = nlohmann::ordered_json::parse(report_to_json(report));
    if (table) rendered += render_report_table(report);
  };
  if (criterion == "both") {
    run(MatchCriterion::Exact);
    run(MatchCriterion::Partial);
  } else {
    run(criterion_from_name(criterion));
  }
  if (confusions > 0) {
    if (!have_tags) throw error("token confusions need aligned tag sequences");
    const ConfusionTable confusion_table = token_confusions(pred_tags, gold_tags);
    output["confusions"] =
        nlohmann::ordered_json::parse(confusions_to_json(confusion_table, confusions));
    if (table) rendered += render_confusions_table(confusion_table, confusions);
  }
  write_or_print(out, output.dump(2) + "\n");
  if (table) std::cerr << rendered;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"labner -- entity recognition toolkit for lab-protocol corpora"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::uint64_t seed = 1;
  std::optional<std::string> out;
  std::string format = "conll";
  app.add_option("--seed", seed, "Random seed (split/train) or seed base (pipeline)");
  app.add_option("--out", out, "Output file or directory");
  app.add_option("--format", format, "Corpus format: conll or standoff")
      ->check(CLI::IsMember({"conll", "standoff"}));

  // convert
  auto* convert = app.add_subcommand("convert", "Convert between standoff and CoNLL");
  std::string convert_from = "standoff";
  std::string convert_to = "conll";
  std::vector<std::string> convert_inputs;
  std::optional<std::string> convert_text_dir;
  bool convert_snap = false;
  bool convert_allow_overlap = false;
  convert->add_option("--from", convert_from, "Input format")
      ->check(CLI::IsMember({"standoff", "conll"}));
  convert->add_option("--to", convert_to, "Output format")
      ->check(CLI::IsMember({"standoff", "conll"}));
  convert->add_option("inputs", convert_inputs, "Input files or directories")->required();
  convert->add_option("--text-dir", convert_text_dir,
                      "Directory holding the .txt files (conll -> standoff)");
  convert->add_flag("--snap", convert_snap, "Snap mid-token mention boundaries outward");
  convert->add_flag("--allow-overlap", convert_allow_overlap,
                    "Keep overlapping mentions when writing standoff");

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics (Vocabulary / OOV report)");
  std::vector<std::string> stats_inputs;
  std::vector<std::string> stats_reference;
  stats->add_option("inputs", stats_inputs, "Corpus files or directories")->required();
  stats->add_option("--reference", stats_reference,
                    "Reference corpus for the OOV count (same format)");

  // split
  auto* split_cmd = app.add_subcommand("split", "Generate a train/validation split");
  std::string split_ids_from;
  double split_fraction = 0.8;
  split_cmd->add_option("--ids-from", split_ids_from,
                        "Standoff directory or file with one document id per line")
      ->required();
  split_cmd->add_option("--train-fraction", split_fraction, "Fraction assigned to train");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a tagger on CoNLL data");
  std::string train_file;
  std::string validation_file;
  TrainConfig train_config;
  bool no_enforce_bio = false;
  train_cmd->add_option("--train", train_file, "Training CoNLL file")->required();
  train_cmd->add_option("--validation", validation_file, "Validation CoNLL file")->required();
  train_cmd->add_option("--max-epochs", train_config.max_epochs, "Epoch cap");
  train_cmd->add_option("--patience", train_config.patience,
                        "Epochs without improvement before stopping");
  train_cmd->add_option("--window", train_config.feature_window, "Feature context radius");
  train_cmd->add_flag("--no-enforce-bio", no_enforce_bio,
                      "Allow BIO-invalid transitions at decode time");

  // tag
  auto* tag_cmd = app.add_subcommand("tag", "Tag a corpus with a trained model");
  std::string tag_model;
  std::string tag_input;
  bool tag_text = false;
  tag_cmd->add_option("--model", tag_model, "Model JSON file")->required();
  tag_cmd->add_option("--input", tag_input, "Input file")->required();
  tag_cmd->add_flag("--text", tag_text, "Input is raw protocol text, not CoNLL");

  // merge
  auto* merge_cmd = app.add_subcommand("merge", "Merge N aligned prediction files");
  std::string merge_method = "sle";
  std::vector<std::string> merge_inputs;
  std::optional<std::string> merge_sidecar;
  std::optional<std::string> merge_alphabet;
  std::optional<std::string> merge_gold;
  merge_cmd->add_option("--method", merge_method, "majority or sle")
      ->check(CLI::IsMember({"majority", "sle"}));
  merge_cmd->add_option("inputs", merge_inputs, "Prediction CoNLL files")->required();
  merge_cmd->add_option("--sidecar", merge_sidecar, "Per-sentence score/repair JSON");
  merge_cmd->add_option("--alphabet", merge_alphabet,
                        "Comma-separated tag alphabet (default: union of observed tags)");
  merge_cmd->add_option("--gold", merge_gold,
                        "Gold CoNLL file; predictions must align with it token-for-token");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against gold");
  std::string eval_gold;
  std::string eval_pred;
  std::string eval_criterion = "both";
  std::size_t eval_confusions = 0;
  bool eval_table = false;
  bool eval_max_matching = false;
  eval_cmd->add_option("--gold", eval_gold, "Gold corpus")->required();
  eval_cmd->add_option("--pred", eval_pred, "Predicted corpus")->required();
  eval_cmd->add_option("--criterion", eval_criterion, "exact, partial or both")
      ->check(CLI::IsMember({"exact", "partial", "both"}));
  eval_cmd->add_option("--confusions", eval_confusions, "Emit the top-K token confusions");
  eval_cmd->add_flag("--table", eval_table, "Also render human-readable tables to stderr");
  eval_cmd->add_flag("--max-matching", eval_max_matching,
                     "Use exhaustive maximum matching instead of greedy");

  // pipeline
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "Split/train/tag/merge/eval ensembling experiment");
  PipelineConfig pipeline_config;
  std::string pipeline_methods = "majority,sle";
  bool pipeline_snap = false;
  bool pipeline_table = false;
  pipeline_cmd->add_option("--data", pipeline_config.data_dir, "Standoff training pool directory")
      ->required();
  pipeline_cmd->add_option("--test", pipeline_config.test_dir, "Standoff test directory")
      ->required();
  pipeline_cmd->add_option("--n-models", pipeline_config.n_models, "Ensemble size");
  pipeline_cmd->add_option("--train-fraction", pipeline_config.train_fraction,
                           "Per-split train fraction");
  pipeline_cmd->add_option("--methods", pipeline_methods, "Comma-separated merge methods");
  pipeline_cmd->add_option("--max-epochs", pipeline_config.train.max_epochs, "Epoch cap");
  pipeline_cmd->add_option("--patience", pipeline_config.train.patience, "Early-stop patience");
  pipeline_cmd->add_flag("--snap", pipeline_snap, "Snap mid-token mention boundaries");
  pipeline_cmd->add_flag("--table", pipeline_table, "Render the report table to stderr");

  try {
    app.parse(argc, argv);

    if (convert->parsed())
      return cmd_convert(convert_from, convert_to, convert_inputs,
                         out ? fs::path(*out) : fs::path("."), convert_text_dir, convert_snap,
                         convert_allow_overlap);

    if (stats->parsed()) {
      const LoadedCorpus corpus = load_corpus(stats_inputs, format, BoundaryPolicy::Error);
      std::optional<std::set<std::string>> reference;
      if (!stats_reference.empty())
        reference = vocabulary_of(
            load_corpus(stats_reference, format, BoundaryPolicy::Error).sentences);
      const CorpusStats report = compute_stats(corpus.sentences, corpus.protocols,
                                               reference ? &*reference : nullptr);
      write_or_print(out, stats_to_json(report));
      return 0;
    }

    if (split_cmd->parsed()) {
      std::vector<std::string> ids;
      if (fs::is_directory(split_ids_from)) {
        for (const auto& doc : read_standoff_dir(split_ids_from)) ids.push_back(doc.doc.id);
      } else {
        std::istringstream in(read_text_file(split_ids_from));
        std::string line;
        while (std::getline(in, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) ids.push_back(line);
        }
      }
      const SplitSpec spec = generate_split(ids, seed, split_fraction);
      write_or_print(out, split_to_json(spec));
      return 0;
    }

    if (train_cmd->parsed()) {
      const auto to_tagged = [](const std::vector<ConllSentence>& sentences) {
        std::vector<TaggedSentence> tagged(sentences.size());
        for (std::size_t s = 0; s < sentences.size(); ++s) {
          for (const auto& token : sentences[s]) {
            tagged[s].surfaces.push_back(token.surface);
            tagged[s].tags.push_back(parse_tag(token.tag));
          }
        }
        return tagged;
      };
      train_config.shuffle_seed = seed;
      train_config.enforce_bio_at_decode = !no_enforce_bio;
      const TrainResult result = train(to_tagged(read_conll_file(train_file)),
                                       to_tagged(read_conll_file(validation_file)), train_config);
      if (!out) throw CLI::ValidationError("--out", "train needs an output model path");
      write_text_file(*out, model_to_json(result.model));
      std::cerr << "labner: trained " << result.epochs_run << " epoch(s); best validation F1 "
                << result.best_validation_f1 << " at epoch " << result.best_epoch << "\n";
      return 0;
    }

    if (tag_cmd->parsed()) {
      const TaggerModel model = model_from_json(read_text_file(tag_model));
      std::vector<std::vector<std::string>> sentences;
      if (tag_text) {
        const ProtocolDocument doc =
            make_document(fs::path(tag_input).stem().string(), read_text_file(tag_input));
        std::vector<std::vector<std::string>> by_step(doc.steps.size());
        for (const Token& token : tokenize(doc))
          by_step[token.sentence_index].push_back(token.surface);
        for (auto& step : by_step)
          if (!step.empty()) sentences.push_back(std::move(step));
      } else {
        for (const auto& sentence : read_conll_file(tag_input)) {
          std::vector<std::string> surfaces(sentence.size());
          for (std::size_t k = 0; k < sentence.size(); ++k) surfaces[k] = sentence[k].surface;
          sentences.push_back(std::move(surfaces));
        }
      }
      const auto predictions = predict(model, sentences);
      std::vector<ConllSentence> tagged(sentences.size());
      for (std::size_t s = 0; s < sentences.size(); ++s) {
        tagged[s].resize(sentences[s].size());
        for (std::size_t k = 0; k < sentences[s].size(); ++k)
          tagged[s][k] = {sentences[s][k], predictions[s][k].to_string()};
      }
      write_or_print(out, write_conll(tagged));
      return 0;
    }

    if (merge_cmd->parsed()) {
      std::vector<std::vector<ConllSentence>> predictions;
      predictions.reserve(merge_inputs.size());
      for (const auto& input : merge_inputs) predictions.push_back(read_conll_file(input));
      if (merge_gold) {
        const auto gold = read_conll_file(*merge_gold);
        for (std::size_t m = 0; m < predictions.size(); ++m) {
          if (predictions[m].size() != gold.size())
            throw error(merge_inputs[m] + ": " + std::to_string(predictions[m].size()) +
                        " sentences, but the gold file has " + std::to_string(gold.size()));
          for (std::size_t s = 0; s < gold.size(); ++s) {
            if (predictions[m][s].size() != gold[s].size())
              throw error(merge_inputs[m] + ": sentence " + std::to_string(s) +
                          " token count differs from gold");
            for (std::size_t k = 0; k < gold[s].size(); ++k)
              if (predictions[m][s][k].surface != gold[s][k].surface)
                throw error(merge_inputs[m] + ": sentence " + std::to_string(s) + ", token " +
                            std::to_string(k) + ": surface differs from gold");
          }
        }
      }
      std::optional<LabelAlphabet> alphabet;
      if (merge_alphabet) {
        std::vector<std::string> tags;
        std::istringstream in(*merge_alphabet);
        std::string item;
        while (std::getline(in, item, ','))
          if (!item.empty()) tags.push_back(item);
        alphabet = LabelAlphabet::from_strings(tags);
      }
      const CorpusMergeResult result =
          merge_corpus(predictions, merge_method_from_name(merge_method), alphabet);
      write_or_print(out, write_conll(result.merged));
      if (merge_sidecar)
        write_text_file(*merge_sidecar,
                        merge_sidecar_json(result, merge_method_from_name(merge_method)));
      return 0;
    }

    if (eval_cmd->parsed())
      return cmd_eval(eval_gold, eval_pred, format, eval_criterion, eval_confusions, eval_table,
                      eval_max_matching, out);

    if (pipeline_cmd->parsed()) {
      pipeline_config.seed_base = seed;
      pipeline_config.boundary_policy =
          pipeline_snap ? BoundaryPolicy::SnapOutward : BoundaryPolicy::Error;
      if (out) pipeline_config.out_dir = *out;
      if (pipeline_config.out_dir.empty())
        throw CLI::ValidationError("--out", "pipeline needs an output directory");
      pipeline_config.methods.clear();
      std::istringstream in(pipeline_methods);
      std::string item;
      while (std::getline(in, item, ','))
        if (!item.empty()) pipeline_config.methods.push_back(merge_method_from_name(item));
      const PipelineResult result = run_pipeline(pipeline_config);
      if (pipeline_table) std::cerr << render_pipeline_table(result.report_json);
      std::cout << result.report_path.string() << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "labner: " << e.what() << "\n";
    return 1;
  } catch (const labner::error& e) {
    std::cerr << "labner: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "labner: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "labner: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
