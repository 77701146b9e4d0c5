#include "vrec/metrics.hpp"

#include <algorithm>

#include <json.hpp>

namespace vrec {

using nlohmann::json;

const char* relevance_rule_name(RelevanceRule r) {
  switch (r) {
    case RelevanceRule::clicked_or_purchased: return "clicked_or_purchased";
    case RelevanceRule::purchased: return "purchased";
    case RelevanceRule::positive_reward: return "positive_reward";
  }
  return "unknown";
}

RelevanceRule relevance_rule_from_name(const std::string& name) {
  if (name == "clicked_or_purchased") return RelevanceRule::clicked_or_purchased;
  if (name == "purchased") return RelevanceRule::purchased;
  if (name == "positive_reward") return RelevanceRule::positive_reward;
  throw ValidationError("unknown relevance rule: " + name);
}

std::set<int> relevant_slots(const PageLog& page, RelevanceRule rule,
                             const XvrTable& table, const RewardMode& mode) {
  std::set<int> out;
  for (std::size_t i = 0; i < page.size(); ++i) {
    const Slot& s = page.slots[i];
    bool relevant = false;
    switch (rule) {
      case RelevanceRule::clicked_or_purchased:
        relevant = s.flags.clicked || s.flags.purchased;
        break;
      case RelevanceRule::purchased:
        relevant = s.flags.purchased;
        break;
      case RelevanceRule::positive_reward:
        relevant = item_reward(s.flags, s.item, table, mode) > 0.0;
        break;
    }
    if (relevant) out.insert(static_cast<int>(i));
  }
  return out;
}

PrMap precision_recall_map(std::span<const int> pi, const std::set<int>& relevant,
                           int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (!is_permutation(pi)) throw ValidationError("pi is not a permutation");
  for (int slot : relevant) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= pi.size()) {
      throw ValidationError("relevant slot index out of range");
    }
  }
  PrMap out;
  if (relevant.empty()) return out;

  // slot at each position, for an ascending scan of the top k.
  std::vector<int> slot_at(pi.size());
  for (std::size_t slot = 0; slot < pi.size(); ++slot) slot_at[pi[slot]] = static_cast<int>(slot);

  const int top = std::min<int>(k, static_cast<int>(pi.size()));
  int hits = 0;
  double ap_sum = 0.0;
  for (int pos = 0; pos < top; ++pos) {
    if (relevant.count(slot_at[pos])) {
      ++hits;
      ap_sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  out.precision = static_cast<double>(hits) / static_cast<double>(k);
  out.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  out.average_precision =
      ap_sum / static_cast<double>(std::min<int>(static_cast<int>(relevant.size()), k));
  return out;
}

EvalReport evaluate_all(const RankStrategy& strategy, std::span<const PageLog> pages,
                        const XvrTable& table, const RewardMode& mode,
                        WeightScheme scheme, int k, RelevanceRule rule) {
  if (pages.empty()) throw ValidationError("evaluate_all: no pages");
  if (k < 1) throw ValidationError("k must be >= 1");
  mode.validate();

  std::vector<ActionType> gmv_actions;
  for (ActionType a : kAllActions) {
    if (table.has(a)) gmv_actions.push_back(a);
  }

  EvalReport report;
  report.k = k;
  report.pages = pages.size();
  double p_sum = 0.0, r_sum = 0.0, ap_sum = 0.0;
  double reward_sum = 0.0, gmv_sum = 0.0;
  for (std::size_t idx = 0; idx < pages.size(); ++idx) {
    const PageLog& page = pages[idx];
    const std::vector<int> pi = strategy(page, idx);
    reward_sum += offline_page_reward(page, pi, table, mode, scheme);
    for (std::size_t slot = 0; slot < page.size(); ++slot) {
      if (pi[slot] >= k) continue;
      for (ActionType a : gmv_actions) {
        gmv_sum += monetized_value(page.slots[slot].flags, page.slots[slot].item,
                                   table, a);
      }
    }
    const std::set<int> relevant = relevant_slots(page, rule, table, mode);
    if (relevant.empty()) continue;
    const PrMap m = precision_recall_map(pi, relevant, k);
    p_sum += m.precision;
    r_sum += m.recall;
    ap_sum += m.average_precision;
    ++report.pages_with_relevant;
  }
  const double n = static_cast<double>(pages.size());
  report.mean_offline_reward = reward_sum / n;
  report.expected_gmv = gmv_sum / n;
  if (report.pages_with_relevant > 0) {
    const double m = static_cast<double>(report.pages_with_relevant);
    report.precision_at_k = p_sum / m;
    report.recall_at_k = r_sum / m;
    report.map_at_k = ap_sum / m;
  }
  return report;
}

std::string EvalReport::to_json() const {
  json doc;
  doc["k"] = k;
  doc["pages"] = pages;
  doc["pages_with_relevant"] = pages_with_relevant;
  doc["precision_at_k"] = precision_at_k;
  doc["recall_at_k"] = recall_at_k;
  doc["map_at_k"] = map_at_k;
  doc["expected_gmv"] = expected_gmv;
  doc["mean_offline_reward"] = mean_offline_reward;
  return doc.dump();
}

}  // namespace vrec
