// End-to-end tests of the labner binary: exit codes, file outputs,
// determinism. The binary path and the bundled sample directory come in
// via compile definitions.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "labner/conll.hpp"
#include "labner/pipeline.hpp"
#include "labner/split.hpp"
#include "support/generators.hpp"

namespace fs = std::filesystem;
using namespace labner;

namespace {

int run(const std::string& args) {
  const std::string command = std::string(LABNER_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "labner_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) { return read_text_file(path); }

const fs::path kSample = fs::path(LABNER_SAMPLE_DIR);

}  // namespace

TEST_CASE("usage errors exit 1, missing files exit 2") {
  CHECK(run("definitely-not-a-subcommand") == 1);
  CHECK(run("eval --gold x") == 1);  // missing required --pred
  CHECK(run("stats --format conll /nonexistent/x.conll") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("standoff -> conll -> standoff round-trips the sample byte-identically") {
  const fs::path work = fresh_dir("roundtrip");
  REQUIRE(run("convert --from standoff --to conll " + kSample.string() + " --out " +
              (work / "conll").string()) == 0);
  for (const auto& id : {"protocol_01", "protocol_02", "protocol_03"})
    CHECK(fs::exists(work / "conll" / (std::string(id) + ".conll")));

  REQUIRE(run("convert --from conll --to standoff " + (work / "conll").string() +
              "/protocol_01.conll " + (work / "conll").string() + "/protocol_02.conll " +
              (work / "conll").string() + "/protocol_03.conll --text-dir " + kSample.string() +
              " --out " + (work / "standoff").string()) == 0);
  for (const auto& id : {"protocol_01", "protocol_02", "protocol_03"}) {
    CHECK(slurp(work / "standoff" / (std::string(id) + ".ann")) ==
          slurp(kSample / (std::string(id) + ".ann")));
    CHECK(slurp(work / "standoff" / (std::string(id) + ".txt")) ==
          slurp(kSample / (std::string(id) + ".txt")));
  }
}

TEST_CASE("empty .ann converts to an all-O conll file") {
  const fs::path work = fresh_dir("empty_ann");
  write_text_file(work / "p.txt", "just one line\n");
  write_text_file(work / "p.ann", "");
  REQUIRE(run("convert --from standoff --to conll " + (work / "p.txt").string() + " --out " +
              work.string()) == 0);
  for (const auto& sentence : read_conll_file(work / "p.conll"))
    for (const auto& token : sentence) CHECK(token.tag == "O");
}

TEST_CASE("mid-token mention boundary fails without --snap and passes with it") {
  const fs::path work = fresh_dir("snap");
  write_text_file(work / "p.txt", "mix the buffer\n");
  write_text_file(work / "p.ann", "T1\tReagent 8 11\tbuf\n");  // inside "buffer"
  CHECK(run("convert --from standoff --to conll " + (work / "p.txt").string() + " --out " +
            (work / "out").string()) == 2);
  CHECK(run("convert --from standoff --to conll " + (work / "p.txt").string() +
            " --snap --out " + (work / "out").string()) == 0);
  const auto sentences = read_conll_file(work / "out" / "p.conll");
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0][2] == ConllToken{"buffer", "B-Reagent"});
}

TEST_CASE("stats on the bundled sample matches the hand-tallied fixture") {
  const fs::path work = fresh_dir("stats");
  REQUIRE(run("stats --format standoff " + kSample.string() + " --out " +
              (work / "stats.json").string()) == 0);
  const auto stats = nlohmann::json::parse(slurp(work / "stats.json"));
  CHECK(stats.at("protocols") == 3);
  CHECK(stats.at("sentences") == 11);
  CHECK(stats.at("tokens") == 82);
  CHECK(stats.at("vocabulary") == 57);
  CHECK(stats.at("oov").is_null());
  const auto& counts = stats.at("label_token_counts");
  CHECK(counts.at("Action") == 8);
  CHECK(counts.at("Amount") == 6);
  CHECK(counts.at("Device") == 2);
  CHECK(counts.at("Generic-Measure") == 2);
  CHECK(counts.at("Location") == 4);
  CHECK(counts.at("O") == 40);
  CHECK(counts.at("Reagent") == 9);
  CHECK(counts.at("Speed") == 2);
  CHECK(counts.at("Temperature") == 5);
  CHECK(counts.at("Time") == 4);

  // reference == corpus -> OOV = 0
  REQUIRE(run("stats --format standoff " + kSample.string() + " --reference " +
              kSample.string() + " --out " + (work / "self.json").string()) == 0);
  CHECK(nlohmann::json::parse(slurp(work / "self.json")).at("oov") == 0);
}

TEST_CASE("split command is deterministic and validates the fraction") {
  const fs::path work = fresh_dir("split");
  const std::string ids = (work / "ids.txt").string();
  write_text_file(ids, "a\nb\nc\nd\ne\nf\ng\nh\ni\nj\n");
  REQUIRE(run("split --ids-from " + ids + " --seed 7 --out " + (work / "s1.json").string()) == 0);
  REQUIRE(run("split --ids-from " + ids + " --seed 7 --out " + (work / "s2.json").string()) == 0);
  CHECK(slurp(work / "s1.json") == slurp(work / "s2.json"));
  CHECK(run("split --ids-from " + ids + " --train-fraction 1.0 --out " +
            (work / "bad.json").string()) == 2);
}

TEST_CASE("train, tag, merge and eval chain together deterministically") {
  const fs::path work = fresh_dir("chain");
  const auto sentences = testing::synthetic_sentences(3, 60, /*ambiguous=*/true);
  std::vector<TaggedSentence> train_half(sentences.begin(), sentences.begin() + 40);
  std::vector<TaggedSentence> val_half(sentences.begin() + 40, sentences.end());
  const auto to_conll_file = [](std::span<const TaggedSentence> tagged, const fs::path& path) {
    std::vector<ConllSentence> out;
    for (const auto& sentence : tagged) {
      ConllSentence row(sentence.surfaces.size());
      for (std::size_t k = 0; k < row.size(); ++k)
        row[k] = {sentence.surfaces[k], sentence.tags[k].to_string()};
      out.push_back(std::move(row));
    }
    write_conll_file(out, path);
  };
  to_conll_file(train_half, work / "train.conll");
  to_conll_file(val_half, work / "val.conll");

  for (int i = 1; i <= 3; ++i) {
    const std::string model = (work / ("model" + std::to_string(i) + ".json")).string();
    REQUIRE(run("train --train " + (work / "train.conll").string() + " --validation " +
                (work / "val.conll").string() + " --seed " + std::to_string(i) + " --out " +
                model) == 0);
    REQUIRE(run("tag --model " + model + " --input " + (work / "val.conll").string() +
                " --out " + (work / ("pred" + std::to_string(i) + ".conll")).string()) == 0);
  }
  // same seed twice -> identical model bytes
  REQUIRE(run("train --train " + (work / "train.conll").string() + " --validation " +
              (work / "val.conll").string() + " --seed 1 --out " +
              (work / "model1_again.json").string()) == 0);
  CHECK(slurp(work / "model1.json") == slurp(work / "model1_again.json"));

  REQUIRE(run("merge --method sle " + (work / "pred1.conll").string() + " " +
              (work / "pred2.conll").string() + " " + (work / "pred3.conll").string() +
              " --out " + (work / "merged.conll").string() + " --sidecar " +
              (work / "merged.json").string()) == 0);
  CHECK(fs::exists(work / "merged.conll"));
  const auto sidecar = nlohmann::json::parse(slurp(work / "merged.json"));
  CHECK(sidecar.at("method") == "sle");
  CHECK(sidecar.at("sentences").size() == val_half.size());

  REQUIRE(run("eval --gold " + (work / "val.conll").string() + " --pred " +
              (work / "merged.conll").string() + " --criterion both --confusions 5 --out " +
              (work / "scores.json").string()) == 0);
  const auto scores = nlohmann::json::parse(slurp(work / "scores.json"));
  CHECK(scores.contains("exact"));
  CHECK(scores.contains("partial"));
  CHECK(scores.at("partial").at("micro").at("f1").get<double>() >=
        scores.at("exact").at("micro").at("f1").get<double>());

  // gold against itself scores a perfect 1.0 under both criteria
  REQUIRE(run("eval --gold " + (work / "val.conll").string() + " --pred " +
              (work / "val.conll").string() + " --criterion both --out " +
              (work / "self.json").string()) == 0);
  const auto self_scores = nlohmann::json::parse(slurp(work / "self.json"));
  CHECK(self_scores.at("exact").at("micro").at("f1") == 1.0);
  CHECK(self_scores.at("partial").at("micro").at("f1") == 1.0);
}

TEST_CASE("misaligned merge inputs exit 2") {
  const fs::path work = fresh_dir("misaligned");
  write_text_file(work / "a.conll", "x\tO\n\ny\tO\n");
  write_text_file(work / "b.conll", "x\tO\n");
  CHECK(run("merge --method majority " + (work / "a.conll").string() + " " +
            (work / "b.conll").string() + " --out " + (work / "m.conll").string()) == 2);
}

TEST_CASE("small pipeline runs are bit-reproducible") {
  const fs::path work = fresh_dir("pipeline");
  testing::SyntheticConfig config;
  config.seed = 5;
  config.n_documents = 12;
  config.steps_per_document = 4;
  config.ambiguous = true;
  const auto documents = testing::synthetic_standoff_corpus(config);
  const std::vector<StandoffDocument> pool(documents.begin(), documents.begin() + 9);
  const std::vector<StandoffDocument> test(documents.begin() + 9, documents.end());
  testing::write_corpus_dir(pool, work / "pool");
  testing::write_corpus_dir(test, work / "test");

  const std::string base = "pipeline --data " + (work / "pool").string() + " --test " +
                           (work / "test").string() + " --n-models 3 --seed 11 --table ";
  REQUIRE(run(base + "--out " + (work / "run1").string()) == 0);
  {
    const std::string table = render_pipeline_table(slurp(work / "run1" / "report.json"));
    CHECK(table.find("#ensembles") != std::string::npos);
    CHECK(table.find("majority/exact") != std::string::npos);
    CHECK(table.find("sle/partial") != std::string::npos);
    CHECK(table.find("individual micro-F1 (exact)") != std::string::npos);
  }
  REQUIRE(run(base + "--out " + (work / "run2").string()) == 0);
  CHECK(slurp(work / "run1" / "report.json") == slurp(work / "run2" / "report.json"));
  CHECK(slurp(work / "run1" / "merged_sle_3.conll") == slurp(work / "run2" / "merged_sle_3.conll"));

  const auto report = nlohmann::json::parse(slurp(work / "run1" / "report.json"));
  CHECK(report.at("individual").size() == 3);
  CHECK(report.at("ensembles").size() == 2);  // n=3 x {majority, sle}

  // n_models=1: merged output equals the single model for both methods
  REQUIRE(run("pipeline --data " + (work / "pool").string() + " --test " +
              (work / "test").string() + " --n-models 1 --seed 11 --out " +
              (work / "single").string()) == 0);
  const auto single = nlohmann::json::parse(slurp(work / "single" / "report.json"));
  const double individual = single.at("individual").at(0).at("exact_micro_f1").get<double>();
  for (const auto& row : single.at("ensembles")) {
    CHECK(row.at("n") == 1);
    CHECK(row.at("exact_micro_f1").get<double>() == individual);
  }
  CHECK(slurp(work / "single" / "merged_majority_1.conll") ==
        slurp(work / "single" / "pred_1.conll"));
}

TEST_CASE("stats over conll files counts one protocol per file") {
  const fs::path work = fresh_dir("conll_stats");
  write_text_file(work / "a.conll", "Put\tB-Action\nx\tO\n");
  write_text_file(work / "b.conll", "y\tO\n\nz\tB-Reagent\n");
  REQUIRE(run("stats --format conll " + (work / "a.conll").string() + " " +
              (work / "b.conll").string() + " --out " + (work / "s.json").string()) == 0);
  const auto stats = nlohmann::json::parse(slurp(work / "s.json"));
  CHECK(stats.at("protocols") == 2);
  CHECK(stats.at("sentences") == 3);
  CHECK(stats.at("tokens") == 4);
  CHECK(stats.at("label_token_counts").at("Action") == 1);
}

TEST_CASE("pipeline output equals manually chaining split/train/tag/merge/eval") {
  const fs::path work = fresh_dir("composition");
  testing::SyntheticConfig config;
  config.seed = 21;
  config.n_documents = 13;
  config.steps_per_document = 4;
  config.ambiguous = true;
  const auto documents = testing::synthetic_standoff_corpus(config);
  const std::vector<StandoffDocument> pool(documents.begin(), documents.begin() + 10);
  const std::vector<StandoffDocument> test(documents.begin() + 10, documents.end());
  testing::write_corpus_dir(pool, work / "pool");
  testing::write_corpus_dir(test, work / "test");

  REQUIRE(run("pipeline --data " + (work / "pool").string() + " --test " +
              (work / "test").string() + " --n-models 3 --seed 40 --out " +
              (work / "auto").string()) == 0);

  // manual chain for model 1 (seed 40 + 1)
  REQUIRE(run("split --ids-from " + (work / "pool").string() + " --seed 41 --out " +
              (work / "manual_split.json").string()) == 0);
  CHECK(slurp(work / "manual_split.json") == slurp(work / "auto" / "split_1.json"));

  REQUIRE(run("convert --from standoff --to conll " + (work / "pool").string() + " --out " +
              (work / "pool_conll").string()) == 0);
  REQUIRE(run("convert --from standoff --to conll " + (work / "test").string() + " --out " +
              (work / "test_conll").string()) == 0);

  const auto split = split_from_json(slurp(work / "manual_split.json"));
  const auto concat = [&](const std::vector<std::string>& ids, const fs::path& dir,
                          const fs::path& out_path) {
    std::vector<ConllSentence> all;
    for (const auto& id : ids) {
      const auto sentences = read_conll_file(dir / (id + ".conll"));
      all.insert(all.end(), sentences.begin(), sentences.end());
    }
    write_conll_file(all, out_path);
  };
  concat(split.side(SplitSide::Train), work / "pool_conll", work / "train.conll");
  concat(split.side(SplitSide::Validation), work / "pool_conll", work / "val.conll");
  std::vector<std::string> test_ids;
  for (const auto& standoff : test) test_ids.push_back(standoff.doc.id);
  std::sort(test_ids.begin(), test_ids.end());
  concat(test_ids, work / "test_conll", work / "test.conll");

  REQUIRE(run("train --train " + (work / "train.conll").string() + " --validation " +
              (work / "val.conll").string() + " --seed 41 --out " +
              (work / "manual_model.json").string()) == 0);
  CHECK(slurp(work / "manual_model.json") == slurp(work / "auto" / "model_1.json"));

  REQUIRE(run("tag --model " + (work / "manual_model.json").string() + " --input " +
              (work / "test.conll").string() + " --out " +
              (work / "manual_pred.conll").string()) == 0);
  CHECK(slurp(work / "manual_pred.conll") == slurp(work / "auto" / "pred_1.conll"));

  REQUIRE(run("merge --method sle " + (work / "auto" / "pred_1.conll").string() + " " +
              (work / "auto" / "pred_2.conll").string() + " " +
              (work / "auto" / "pred_3.conll").string() + " --gold " +
              (work / "test.conll").string() + " --out " +
              (work / "manual_merged.conll").string() + " --sidecar " +
              (work / "manual_sidecar.json").string()) == 0);
  CHECK(slurp(work / "manual_merged.conll") == slurp(work / "auto" / "merged_sle_3.conll"));
  CHECK(slurp(work / "manual_sidecar.json") == slurp(work / "auto" / "merged_sle_3.json"));

  // the report's merged F1 equals an independent eval of the merged file
  REQUIRE(run("eval --gold " + (work / "test.conll").string() + " --pred " +
              (work / "manual_merged.conll").string() + " --criterion exact --out " +
              (work / "manual_eval.json").string()) == 0);
  const auto eval_json = nlohmann::json::parse(slurp(work / "manual_eval.json"));
  const auto report = nlohmann::json::parse(slurp(work / "auto" / "report.json"));
  double reported = -1.0;
  for (const auto& row : report.at("ensembles"))
    if (row.at("n") == 3 && row.at("method") == "sle")
      reported = row.at("exact_micro_f1").get<double>();
  CHECK(eval_json.at("exact").at("micro").at("f1").get<double>() == reported);
}
