#ifndef LABNER_EVAL_HPP
#define LABNER_EVAL_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "labner/document.hpp"
#include "labner/tagscheme.hpp"

namespace labner {

// Exact: same label and identical boundaries. Partial: same label and
// overlapping character ranges (max(starts) < min(ends)).
enum class MatchCriterion { Exact, Partial };

std::string criterion_name(MatchCriterion criterion);
MatchCriterion criterion_from_name(std::string_view name);

bool mentions_match(const EntityMention& predicted, const EntityMention& gold,
                    MatchCriterion criterion);

struct MatchedPair {
  std::size_t predicted_index = 0;
  std::size_t gold_index = 0;
};

// One-to-one matching between predicted and gold mentions of a document.
// Predictions are visited in canonical (start, end, label) order and each
// consumes the first matching unconsumed gold in the same canonical
// order; with maximum_matching, an exhaustive augmenting-path matching
// maximizes the number of pairs instead. Both lists must be internally
// non-overlapping.
std::vector<MatchedPair> match_entities(std::span<const EntityMention> predicted,
                                        std::span<const EntityMention> gold,
                                        MatchCriterion criterion,
                                        bool maximum_matching = false);

struct LabelScore {
  std::size_t tp = 0;
  std::size_t predicted = 0;  // |P|
  std::size_t gold = 0;       // |T|
  double precision = 0.0;     // tp / |P|, 0 when |P| = 0
  double recall = 0.0;        // tp / |T|, 0 when |T| = 0
  double f1 = 0.0;            // 2PR/(P+R), 0 when P+R = 0
};

struct ScoreReport {
  MatchCriterion criterion = MatchCriterion::Exact;
  std::map<std::string, LabelScore> per_label;
  LabelScore micro;      // pooled over labels
  double macro_f1 = 0.0; // unweighted mean of f1 over labels in P or T
};

// Mentions keyed by document id; the two maps must cover the same ids.
ScoreReport score_mentions(const std::map<std::string, std::vector<EntityMention>>& predicted,
                           const std::map<std::string, std::vector<EntityMention>>& gold,
                           MatchCriterion criterion, bool maximum_matching = false);

std::string report_to_json(const ScoreReport& report);
std::string render_report_table(const ScoreReport& report);

// Token-level disagreements keyed by (predicted tag, gold tag), the shape
// of a top-errors table: P_Label / T_Label / Count.
struct ConfusionRow {
  std::string predicted;
  std::string gold;
  std::size_t count = 0;

  bool operator==(const ConfusionRow&) const = default;
};

class ConfusionTable {
public:
  void add(const std::string& predicted, const std::string& gold);
  std::size_t total() const { return total_; }
  // Rows sorted by descending count, then by (predicted, gold).
  std::vector<ConfusionRow> top(std::size_t k) const;
  std::vector<ConfusionRow> all() const;

private:
  std::map<std::pair<std::string, std::string>, std::size_t> counts_;
  std::size_t total_ = 0;
};

// Counts every aligned position where predicted != gold. Throws error on
// length mismatch.
ConfusionTable token_confusions(std::span<const TagSequence> predicted,
                                std::span<const TagSequence> gold);

std::string confusions_to_json(const ConfusionTable& table, std::size_t top_k);
std::string render_confusions_table(const ConfusionTable& table, std::size_t top_k);

}  // namespace labner

#endif  // LABNER_EVAL_HPP
