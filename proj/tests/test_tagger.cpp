#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "labner/error.hpp"
#include "labner/tagger.hpp"
#include "support/generators.hpp"

using namespace labner;

namespace {

// Exhaustive decode reference: the best score over all |Sigma|^L id
// sequences (optionally restricted to BIO-valid ones).
double max_score_enumerated(const TaggerModel& model,
                            const std::vector<std::vector<std::size_t>>& features,
                            bool valid_only) {
  const std::size_t n = model.alphabet().size();
  const std::size_t length = features.size();
  std::vector<std::size_t> ids(length, 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    bool admissible = true;
    if (valid_only) {
      TagSequence tags;
      for (const std::size_t id : ids) tags.push_back(model.alphabet().tag(id));
      admissible = validate_bio(tags).empty();
    }
    if (admissible) best = std::max(best, sequence_score_ids(model, features, ids));
    std::size_t k = 0;
    while (k < length && ++ids[k] == n) {
      ids[k] = 0;
      ++k;
    }
    if (k == length) break;
  }
  return best;
}

std::vector<std::string> random_sentence(testing::Rng& rng, std::size_t length) {
  std::vector<std::string> surfaces(length);
  for (auto& surface : surfaces) surface = "tok" + std::to_string(testing::pick(rng, 6));
  return surfaces;
}

}  // namespace

TEST_CASE("all-zero weights decode to the alphabet-first tag everywhere") {
  const LabelAlphabet alphabet =
      LabelAlphabet::from_strings(std::vector<std::string>{"B-Action", "O", "I-Action"});
  TaggerModel model(alphabet, {"w=a"}, 1, /*enforce_bio=*/false);
  const auto tags = viterbi_decode(model, std::vector<std::string>{"a", "a", "a"});
  CHECK(tags == TagSequence{begin_tag("Action"), begin_tag("Action"), begin_tag("Action")});
  CHECK(viterbi_decode(model, std::vector<std::string>{}).empty());
}

TEST_CASE("two-token two-tag decode agrees with enumerating all four paths") {
  const LabelAlphabet alphabet =
      LabelAlphabet::from_strings(std::vector<std::string>{"B-Action", "O"});
  TaggerModel model(alphabet, {"w=a", "w=b"}, 1, false);
  const std::size_t B = 0, O = 1;
  model.emission(0, B) = 2.0;
  model.emission(0, O) = 1.0;
  model.emission(1, B) = 0.0;
  model.emission(1, O) = 0.5;
  model.transition(B, O) = 1.0;

  const std::vector<std::string> sentence = {"a", "b"};
  const auto features = model.featurize(sentence);
  double best = -1e18;
  std::vector<std::size_t> best_ids;
  for (std::size_t y0 : {B, O}) {
    for (std::size_t y1 : {B, O}) {
      const std::vector<std::size_t> ids = {y0, y1};
      const double score = sequence_score_ids(model, features, ids);
      if (score > best) {
        best = score;
        best_ids = ids;
      }
    }
  }
  CHECK(best == 3.5);
  CHECK(best_ids == std::vector<std::size_t>{B, O});
  const auto decoded = viterbi_decode(model, sentence);
  CHECK(decoded == TagSequence{begin_tag("Action"), outside_tag()});
  CHECK(sequence_score(model, sentence, decoded) == best);
}

TEST_CASE("decode score equals the exhaustive maximum on small instances") {
  testing::Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const bool enforce = i % 2 == 0;
    TaggerModel model = testing::random_integer_model(rng, 2 + testing::pick(rng, 4), enforce);
    const auto sentence = random_sentence(rng, 1 + testing::pick(rng, 7));
    const auto features = model.featurize(sentence);
    const auto decoded = viterbi_decode(model, sentence);
    if (enforce) CHECK(validate_bio(decoded).empty());
    // integer weights make every path score exact, so compare with ==
    CHECK(sequence_score(model, sentence, decoded) ==
          max_score_enumerated(model, features, enforce));
  }
}

TEST_CASE("decode output scores at least as high as random sequences") {
  testing::Rng rng(99);
  TaggerModel model = testing::random_integer_model(rng, 4, false);
  const auto sentence = random_sentence(rng, 6);
  const auto features = model.featurize(sentence);
  const auto decoded = viterbi_decode(model, sentence);
  const double decoded_score = sequence_score(model, sentence, decoded);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::size_t> ids(6);
    for (auto& id : ids) id = testing::pick(rng, model.alphabet().size());
    CHECK(decoded_score >= sequence_score_ids(model, features, ids));
  }
}

TEST_CASE("enforce-BIO decoding never emits illegal inside tags") {
  testing::Rng rng(4242);
  for (int i = 0; i < 100; ++i) {
    TaggerModel model = testing::random_integer_model(rng, 2 + testing::pick(rng, 5), true);
    const auto sentence = random_sentence(rng, testing::pick(rng, 10));
    CHECK(validate_bio(viterbi_decode(model, sentence)).empty());
  }
}

TEST_CASE("training on a separable corpus reaches near-perfect span F1") {
  const auto training = testing::synthetic_sentences(5, 200);
  const auto heldout = testing::synthetic_sentences(6, 50);
  const TrainResult result = train(training, heldout, TrainConfig{});
  CHECK(result.epochs_run <= 30);

  const auto f1_on = [&](std::span<const TaggedSentence> corpus) {
    std::vector<std::vector<std::string>> surfaces;
    std::vector<TagSequence> gold;
    for (const auto& sentence : corpus) {
      surfaces.push_back(sentence.surfaces);
      gold.push_back(sentence.tags);
    }
    return span_exact_micro_f1(gold, predict(result.model, surfaces));
  };
  CHECK(f1_on(training) >= 0.99);
  CHECK(f1_on(heldout) >= 0.90);
  CHECK(result.model.averaged());
}

TEST_CASE("training is deterministic given the seed") {
  const auto training = testing::synthetic_sentences(11, 40);
  const auto heldout = testing::synthetic_sentences(12, 10);
  TrainConfig config;
  config.max_epochs = 5;
  const TrainResult a = train(training, heldout, config);
  const TrainResult b = train(training, heldout, config);
  CHECK(model_to_json(a.model) == model_to_json(b.model));
  CHECK(a.validation_f1_history == b.validation_f1_history);
}

TEST_CASE("an update happens iff the decode mismatches the gold") {
  // gold == what the zero-weight model already decodes (alphabet-first tag
  // everywhere): no update may ever fire.
  std::vector<TaggedSentence> trivial(5);
  for (auto& sentence : trivial) {
    sentence.surfaces = {"a", "b"};
    sentence.tags = {begin_tag("Action"), begin_tag("Action")};
  }
  TrainConfig config;
  config.max_epochs = 4;
  const TrainResult quiet = train(trivial, trivial, config);
  for (const std::size_t updates : quiet.updates_per_epoch) CHECK(updates == 0);

  // a corpus the zero model gets wrong must trigger updates in epoch 1
  const auto training = testing::synthetic_sentences(21, 30);
  const TrainResult busy = train(training, training, config);
  CHECK(busy.updates_per_epoch.front() > 0);
}

TEST_CASE("best validation F1 tracks the running maximum") {
  const auto training = testing::synthetic_sentences(31, 60, /*ambiguous=*/true);
  const auto heldout = testing::synthetic_sentences(32, 20, /*ambiguous=*/true);
  const TrainResult result = train(training, heldout, TrainConfig{});
  double best = 0.0;
  for (const double f1 : result.validation_f1_history) best = std::max(best, f1);
  CHECK(result.best_validation_f1 == best);
  REQUIRE(result.best_epoch >= 1);
  CHECK(result.validation_f1_history[result.best_epoch - 1] == best);
}

TEST_CASE("training rejects an empty corpus") {
  CHECK_THROWS_AS(train({}, {}, TrainConfig{}), error);
}

TEST_CASE("predictions preserve sentence count and token counts") {
  const auto training = testing::synthetic_sentences(41, 30);
  const TrainResult result = train(training, training, TrainConfig{.max_epochs = 3});
  std::vector<std::vector<std::string>> inputs;
  for (const auto& sentence : training) inputs.push_back(sentence.surfaces);
  const auto predictions = predict(result.model, inputs);
  REQUIRE(predictions.size() == inputs.size());
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    CHECK(predictions[s].size() == inputs[s].size());
    CHECK(validate_bio(predictions[s]).empty());
  }
  CHECK(predict(result.model, std::vector<std::vector<std::string>>{}).empty());
}

TEST_CASE("model json round-trips exactly") {
  const auto training = testing::synthetic_sentences(51, 25);
  const TrainResult result = train(training, training, TrainConfig{.max_epochs = 3});
  const std::string json = model_to_json(result.model);
  const TaggerModel loaded = model_from_json(json);
  CHECK(model_to_json(loaded) == json);

  const std::vector<std::string> sentence = training.front().surfaces;
  CHECK(viterbi_decode(loaded, sentence) == viterbi_decode(result.model, sentence));

  CHECK_THROWS_AS(model_from_json("{}"), parse_error);
  CHECK_THROWS_AS(model_from_json("not json"), parse_error);
}
