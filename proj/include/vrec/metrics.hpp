#pragma once

#include <set>
#include <span>
#include <string>

#include "vrec/replay.hpp"
#include "vrec/reward.hpp"
#include "vrec/types.hpp"
#include "vrec/xvr.hpp"

namespace vrec {

// What counts as a relevant slot for the ranking metrics.
enum class RelevanceRule {
  clicked_or_purchased,  // positive-label definition of the LTR baselines
  purchased,
  positive_reward,  // item_reward > 0 under the configured mode/table
};

const char* relevance_rule_name(RelevanceRule r);
RelevanceRule relevance_rule_from_name(const std::string& name);

std::set<int> relevant_slots(const PageLog& page, RelevanceRule rule,
                             const XvrTable& table, const RewardMode& mode);

struct PrMap {
  double precision = 0.0;
  double recall = 0.0;
  double average_precision = 0.0;
};

// Top-k ranking metrics for one page.
//   precision@k = |top-k ∩ relevant| / k
//   recall@k    = |top-k ∩ relevant| / |relevant|
//   AP@k        = sum over relevant slots in the top k of the precision at
//                 their positions, divided by min(|relevant|, k)
// All three are 0 when relevant is empty; aggregation skips such pages.
PrMap precision_recall_map(std::span<const int> pi, const std::set<int>& relevant,
                           int k);

struct EvalReport {
  double precision_at_k = 0.0;
  double recall_at_k = 0.0;
  double map_at_k = 0.0;
  double expected_gmv = 0.0;  // per-page mean monetized value of top-k slots
  double mean_offline_reward = 0.0;
  int k = 20;
  std::size_t pages = 0;
  std::size_t pages_with_relevant = 0;

  std::string to_json() const;
};

// Full evaluation of a ranking strategy. Precision/recall/MAP are macro
// averages over pages with at least one relevant slot; the value metrics
// average over all pages. The GMV column counts every action the table
// covers, restricted to slots the strategy places in its top k.
EvalReport evaluate_all(const RankStrategy& strategy, std::span<const PageLog> pages,
                        const XvrTable& table, const RewardMode& mode,
                        WeightScheme scheme, int k, RelevanceRule rule);

}  // namespace vrec
