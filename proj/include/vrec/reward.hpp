#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vrec/ranking.hpp"
#include "vrec/types.hpp"
#include "vrec/xvr.hpp"

namespace vrec {

// Which action types contribute to the monetized reward. Default is
// click + purchase; cart and wishlist terms are enabled for ablations.
struct RewardMode {
  std::array<bool, 4> included{};

  static RewardMode click_pay() {
    RewardMode m;
    m.included[static_cast<int>(ActionType::Click)] = true;
    m.included[static_cast<int>(ActionType::Purchase)] = true;
    return m;
  }

  static RewardMode all_actions() {
    RewardMode m;
    m.included.fill(true);
    return m;
  }

  static RewardMode from_names(std::span<const std::string> names) {
    RewardMode m;
    for (const std::string& n : names) {
      m.included[static_cast<int>(action_from_name(n))] = true;
    }
    m.validate();
    return m;
  }

  bool contains(ActionType a) const { return included[static_cast<int>(a)]; }

  void set(ActionType a, bool on) { included[static_cast<int>(a)] = on; }

  void validate() const {
    for (bool b : included) {
      if (b) return;
    }
    throw ValidationError("reward mode must include at least one action");
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (ActionType a : kAllActions) {
      if (contains(a)) out.emplace_back(action_name(a));
    }
    return out;
  }

  bool operator==(const RewardMode&) const = default;
};

// Position weight variants for the offline reward. exp_decay gives the top
// position the largest weight (W_k = e^{-k}); exp_growth is the ascending
// variant (W_k = e^{k}), selectable for comparison.
enum class WeightScheme { exp_decay, exp_growth };

inline const char* weight_scheme_name(WeightScheme s) {
  return s == WeightScheme::exp_decay ? "exp_decay" : "exp_growth";
}

inline WeightScheme weight_scheme_from_name(const std::string& name) {
  if (name == "exp_decay") return WeightScheme::exp_decay;
  if (name == "exp_growth") return WeightScheme::exp_growth;
  throw ValidationError("unknown weight scheme: " + name);
}

inline double position_weight(WeightScheme scheme, int position) {
  return scheme == WeightScheme::exp_decay
             ? std::exp(-static_cast<double>(position))
             : std::exp(static_cast<double>(position));
}

// Monetized reward of one slot: sum over actions in the mode of
// I(x,i) * xvr(i,x) * price(i).
inline double item_reward(const ActionFlags& flags, const ItemFeatures& item,
                          const XvrTable& table, const RewardMode& mode) {
  double r = 0.0;
  for (ActionType a : kAllActions) {
    if (mode.contains(a)) r += monetized_value(flags, item, table, a);
  }
  return r;
}

inline double page_reward(const PageLog& page, const XvrTable& table,
                          const RewardMode& mode) {
  double r = 0.0;
  for (const Slot& s : page.slots) r += item_reward(s.flags, s.item, table, mode);
  return r;
}

// Position-weighted offline reward: sum_i R_i * W(pi(i)). Generic weight
// hook used by tests; production callers pass a WeightScheme below.
template <typename WeightFn>
double offline_page_reward_with(const PageLog& page, std::span<const int> pi,
                                const XvrTable& table, const RewardMode& mode,
                                WeightFn&& weight) {
  if (pi.size() != page.size() || !is_permutation(pi)) {
    throw ValidationError("pi is not a permutation of the page slots");
  }
  double r = 0.0;
  for (std::size_t i = 0; i < page.size(); ++i) {
    r += item_reward(page.slots[i].flags, page.slots[i].item, table, mode) *
         weight(pi[i]);
  }
  return r;
}

inline double offline_page_reward(const PageLog& page, std::span<const int> pi,
                                  const XvrTable& table, const RewardMode& mode,
                                  WeightScheme scheme) {
  return offline_page_reward_with(
      page, pi, table, mode, [scheme](int k) { return position_weight(scheme, k); });
}

}  // namespace vrec
