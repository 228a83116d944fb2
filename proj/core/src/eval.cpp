#include "labner/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "labner/error.hpp"

namespace labner {

namespace {

using Canon = std::tuple<std::size_t, std::size_t, std::string>;

Canon canonical_key(const EntityMention& mention) {
  return {mention.start, mention.end, mention.label};
}

std::vector<std::size_t> canonical_order(std::span<const EntityMention> mentions) {
  std::vector<std::size_t> order(mentions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_key(mentions[a]) < canonical_key(mentions[b]);
  });
  return order;
}

void check_no_overlap(std::span<const EntityMention> mentions, const char* which) {
  const auto order = canonical_order(mentions);
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& prev = mentions[order[i - 1]];
    const auto& cur = mentions[order[i]];
    if (spans_overlap(prev.start, prev.end, cur.start, cur.end))
      throw error(std::string(which) + " mentions overlap: \"" + prev.surface + "\" [" +
                  std::to_string(prev.start) + ", " + std::to_string(prev.end) + ") and \"" +
                  cur.surface + "\" [" + std::to_string(cur.start) + ", " +
                  std::to_string(cur.end) + ")");
  }
}

void finalize(LabelScore& score) {
  score.precision =
      score.predicted == 0 ? 0.0 : static_cast<double>(score.tp) / static_cast<double>(score.predicted);
  score.recall = score.gold == 0 ? 0.0 : static_cast<double>(score.tp) / static_cast<double>(score.gold);
  const double sum = score.precision + score.recall;
  score.f1 = sum == 0.0 ? 0.0 : 2.0 * score.precision * score.recall / sum;
}

}  // namespace

std::string criterion_name(MatchCriterion criterion) {
  return criterion == MatchCriterion::Exact ? "exact" : "partial";
}

MatchCriterion criterion_from_name(std::string_view name) {
  if (name == "exact") return MatchCriterion::Exact;
  if (name == "partial") return MatchCriterion::Partial;
  throw error("unknown match criterion \"" + std::string(name) + "\" (expected exact|partial)");
}

bool mentions_match(const EntityMention& predicted, const EntityMention& gold,
                    MatchCriterion criterion) {
  if (predicted.label != gold.label) return false;
  if (criterion == MatchCriterion::Exact)
    return predicted.start == gold.start && predicted.end == gold.end;
  return std::max(predicted.start, gold.start) < std::min(predicted.end, gold.end);
}

std::vector<MatchedPair> match_entities(std::span<const EntityMention> predicted,
                                        std::span<const EntityMention> gold,
                                        MatchCriterion criterion, bool maximum_matching) {
  check_no_overlap(predicted, "predicted");
  check_no_overlap(gold, "gold");
  const auto pred_order = canonical_order(predicted);
  const auto gold_order = canonical_order(gold);

  std::vector<MatchedPair> pairs;
  if (!maximum_matching) {
    std::vector<bool> consumed(gold.size(), false);
    for (const std::size_t pi : pred_order) {
      for (const std::size_t gi : gold_order) {
        if (consumed[gi] || !mentions_match(predicted[pi], gold[gi], criterion)) continue;
        consumed[gi] = true;
        pairs.push_back({pi, gi});
        break;
      }
    }
  } else {
    // Kuhn's augmenting paths over the candidate graph; visiting order is
    // canonical on both sides, so the result is input-order independent.
    std::vector<std::vector<std::size_t>> candidates(predicted.size());
    for (const std::size_t pi : pred_order)
      for (const std::size_t gi : gold_order)
        if (mentions_match(predicted[pi], gold[gi], criterion)) candidates[pi].push_back(gi);
    constexpr std::size_t unmatched = static_cast<std::size_t>(-1);
    std::vector<std::size_t> gold_match(gold.size(), unmatched);
    std::vector<bool> visited;
    const auto augment = [&](auto&& self, std::size_t pi) -> bool {
      for (const std::size_t gi : candidates[pi]) {
        if (visited[gi]) continue;
        visited[gi] = true;
        if (gold_match[gi] == unmatched || self(self, gold_match[gi])) {
          gold_match[gi] = pi;
          return true;
        }
      }
      return false;
    };
    for (const std::size_t pi : pred_order) {
      visited.assign(gold.size(), false);
      augment(augment, pi);
    }
    for (const std::size_t gi : gold_order)
      if (gold_match[gi] != unmatched) pairs.push_back({gold_match[gi], gi});
    std::sort(pairs.begin(), pairs.end(), [&](const MatchedPair& a, const MatchedPair& b) {
      return canonical_key(predicted[a.predicted_index]) <
             canonical_key(predicted[b.predicted_index]);
    });
  }
  return pairs;
}

ScoreReport score_mentions(const std::map<std::string, std::vector<EntityMention>>& predicted,
                           const std::map<std::string, std::vector<EntityMention>>& gold,
                           MatchCriterion criterion, bool maximum_matching) {
  for (const auto& [id, _] : predicted)
    if (!gold.contains(id)) throw error("document \"" + id + "\" has predictions but no gold");
  for (const auto& [id, _] : gold)
    if (!predicted.contains(id)) throw error("document \"" + id + "\" has gold but no predictions");

  ScoreReport report;
  report.criterion = criterion;
  for (const auto& [id, pred_mentions] : predicted) {
    const auto& gold_mentions = gold.at(id);
    for (const auto& mention : pred_mentions) ++report.per_label[mention.label].predicted;
    for (const auto& mention : gold_mentions) ++report.per_label[mention.label].gold;
    const auto pairs = match_entities(pred_mentions, gold_mentions, criterion, maximum_matching);
    for (const auto& pair : pairs) ++report.per_label[pred_mentions[pair.predicted_index].label].tp;
  }

  double f1_sum = 0.0;
  for (auto& [label, score] : report.per_label) {
    finalize(score);
    report.micro.tp += score.tp;
    report.micro.predicted += score.predicted;
    report.micro.gold += score.gold;
    f1_sum += score.f1;
  }
  finalize(report.micro);
  report.macro_f1 = report.per_label.empty() ? 0.0 : f1_sum / static_cast<double>(report.per_label.size());
  return report;
}

std::string report_to_json(const ScoreReport& report) {
  nlohmann::ordered_json j;
  j["criterion"] = criterion_name(report.criterion);
  const auto score_json = [](const LabelScore& score) {
    nlohmann::ordered_json s;
    s["tp"] = score.tp;
    s["predicted"] = score.predicted;
    s["gold"] = score.gold;
    s["precision"] = score.precision;
    s["recall"] = score.recall;
    s["f1"] = score.f1;
    return s;
  };
  nlohmann::ordered_json per_label;
  for (const auto& [label, score] : report.per_label) per_label[label] = score_json(score);
  j["per_label"] = std::move(per_label);
  j["micro"] = score_json(report.micro);
  j["macro_f1"] = report.macro_f1;
  return j.dump(2) + "\n";
}

std::string render_report_table(const ScoreReport& report) {
  std::ostringstream out;
  out << "criterion: " << criterion_name(report.criterion) << "\n";
  out << std::left << std::setw(20) << "label" << std::right << std::setw(7) << "tp"
      << std::setw(7) << "|P|" << std::setw(7) << "|T|" << std::setw(10) << "P" << std::setw(10)
      << "R" << std::setw(10) << "F1" << "\n";
  const auto row = [&](const std::string& label, const LabelScore& score) {
    out << std::left << std::setw(20) << label << std::right << std::setw(7) << score.tp
        << std::setw(7) << score.predicted << std::setw(7) << score.gold << std::fixed
        << std::setprecision(4) << std::setw(10) << score.precision << std::setw(10)
        << score.recall << std::setw(10) << score.f1 << "\n";
    out.unsetf(std::ios::fixed);
  };
  for (const auto& [label, score] : report.per_label) row(label, score);
  row("micro", report.micro);
  out << "macro-F1 " << std::fixed << std::setprecision(4) << report.macro_f1 << "\n";
  return out.str();
}

void ConfusionTable::add(const std::string& predicted, const std::string& gold) {
  ++counts_[{predicted, gold}];
  ++total_;
}

std::vector<ConfusionRow> ConfusionTable::all() const {
  std::vector<ConfusionRow> rows;
  rows.reserve(counts_.size());
  for (const auto& [key, count] : counts_) rows.push_back({key.first, key.second, count});
  std::sort(rows.begin(), rows.end(), [](const ConfusionRow& a, const ConfusionRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return std::tie(a.predicted, a.gold) < std::tie(b.predicted, b.gold);
  });
  return rows;
}

std::vector<ConfusionRow> ConfusionTable::top(std::size_t k) const {
  auto rows = all();
  if (rows.size() > k) rows.resize(k);
  return rows;
}

ConfusionTable token_confusions(std::span<const TagSequence> predicted,
                                std::span<const TagSequence> gold) {
  if (predicted.size() != gold.size())
    throw error("token_confusions: corpus length mismatch (" + std::to_string(predicted.size()) +
                " vs " + std::to_string(gold.size()) + " sentences)");
  ConfusionTable table;
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    if (predicted[s].size() != gold[s].size())
      throw error("token_confusions: sentence " + std::to_string(s) + " length mismatch (" +
                  std::to_string(predicted[s].size()) + " vs " + std::to_string(gold[s].size()) +
                  ")");
    for (std::size_t k = 0; k < predicted[s].size(); ++k)
      if (!(predicted[s][k] == gold[s][k]))
        table.add(predicted[s][k].to_string(), gold[s][k].to_string());
  }
  return table;
}

std::string confusions_to_json(const ConfusionTable& table, std::size_t top_k) {
  nlohmann::ordered_json j;
  j["total"] = table.total();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.top(top_k)) {
    nlohmann::ordered_json r;
    r["predicted"] = row.predicted;
    r["gold"] = row.gold;
    r["count"] = row.count;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string render_confusions_table(const ConfusionTable& table, std::size_t top_k) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "P_Label" << std::setw(16) << "T_Label" << "Count\n";
  for (const auto& row : table.top(top_k))
    out << std::left << std::setw(16) << row.predicted << std::setw(16) << row.gold << row.count
        << "\n";
  return out.str();
}

}  // namespace labner
