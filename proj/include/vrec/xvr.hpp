#pragma once

#include <array>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vrec/types.hpp"

namespace vrec {

// Estimated action-to-purchase conversion rates, per item and action type.
// Estimation counts within-page co-occurrence: a slot contributes to
// n_x(item) when action x is flagged, and to n_{x&purchase}(item) when both
// x and purchase are flagged on the same slot.
//
// The smoothed estimate for an item is
//   xvr(i, x) = (n_{x&pay}(i) + pseudo_count * g_x) / (n_x(i) + pseudo_count)
// where g_x is the global ratio sum(n_{x&pay}) / sum(n_x). Items never seen
// with action x fall back to g_x. Purchase converts to purchase trivially,
// so lookups for ActionType::Purchase always return 1.
class XvrTable {
 public:
  struct ActionSlice {
    bool present = false;
    double pseudo_count = 0.0;
    double global = 0.0;
    std::unordered_map<std::string, double> items;
  };

  // Estimates one action's slice from data. Throws ValidationError when the
  // action never occurs in the data (the global ratio is undefined); supply
  // a prior slice via set_global in that case.
  void estimate(const Dataset& data, ActionType action, double pseudo_count);

  // Installs a fixed global rate for an action without per-item estimates.
  void set_global(ActionType action, double rate, double pseudo_count = 0.0);

  bool has(ActionType action) const;

  // Conversion rate for (item, action). Purchase returns 1.0. Unknown items
  // fall back to the action's global rate. Throws ValidationError when the
  // action has no estimate at all.
  double lookup(const std::string& item_id, ActionType action) const;

  const ActionSlice& slice(ActionType action) const;

  // One JSON document per action:
  //   {"action": str, "pseudo_count": float, "global": float,
  //    "items": {"<id>": float, ...}}
  std::string serialize_action(ActionType action) const;
  void save_action(ActionType action, const std::string& path) const;
  void load_action(const std::string& path);
  void parse_action(const std::string& text);

 private:
  std::array<ActionSlice, 4> slices_;
};

// Convenience: estimate several actions at once with a shared pseudo-count.
XvrTable estimate_xvr(const Dataset& data, std::span<const ActionType> actions,
                      double pseudo_count);

// File layout used by the CLI: one xvr_<action>.json per estimated action.
std::string xvr_file_name(ActionType action);
void save_xvr_dir(const XvrTable& table, const std::string& dir,
                  std::span<const ActionType> actions);
XvrTable load_xvr_dir(const std::string& dir);

// Monetized value of one action on one slot: I(x,i) * xvr(i,x) * price(i).
double monetized_value(const ActionFlags& flags, const ItemFeatures& item,
                       const XvrTable& table, ActionType action);

struct GmvSummary {
  double total = 0.0;
  double per_page_mean = 0.0;
};

// Expected GMV: sum of monetized_value over pages, slots and the given
// action set. Empty page range yields zeros.
GmvSummary expected_gmv(std::span<const PageLog> pages, const XvrTable& table,
                        std::span<const ActionType> actions);

}  // namespace vrec
