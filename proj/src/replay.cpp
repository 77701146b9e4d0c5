#include "vrec/replay.hpp"

#include <fstream>

#include <json.hpp>

#include "vrec/policy.hpp"
#include "vrec/rng.hpp"

namespace vrec {

using nlohmann::json;

RankStrategy logged_order_strategy() {
  return [](const PageLog& page, std::size_t) {
    std::vector<int> pi(page.size());
    for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = static_cast<int>(i);
    return pi;
  };
}

RankStrategy seeded_random_strategy(std::uint64_t seed) {
  return [seed](const PageLog& page, std::size_t page_index) {
    Rng rng(derive_seed(seed, page_index));
    std::vector<int> pi(page.size());
    for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = static_cast<int>(i);
    // Fisher-Yates on the position assignment.
    for (std::size_t i = pi.size(); i > 1; --i) {
      std::swap(pi[i - 1], pi[rng.uniform_int(static_cast<int>(i))]);
    }
    return pi;
  };
}

RankStrategy oracle_strategy(const XvrTable& table, RewardMode mode) {
  return [&table, mode](const PageLog& page, std::size_t) {
    std::vector<double> rewards(page.size());
    for (std::size_t i = 0; i < page.size(); ++i) {
      rewards[i] = item_reward(page.slots[i].flags, page.slots[i].item, table, mode);
    }
    return permutation_from_scores(rewards);
  };
}

RankStrategy fixed_coefficients_strategy(const ActionCoefficients& coeffs,
                                         const XvrTable& table, ScoreMode mode) {
  return [coeffs, &table, mode](const PageLog& page, std::size_t) {
    std::vector<ItemFeatures> items;
    items.reserve(page.size());
    for (const Slot& s : page.slots) items.push_back(s.item);
    return rank_page(items, table, coeffs, mode);
  };
}

ReplayReport replay_evaluate(const RankStrategy& strategy,
                             std::span<const PageLog> pages, const XvrTable& table,
                             const RewardMode& mode, WeightScheme scheme) {
  if (pages.empty()) throw ValidationError("replay: no pages to evaluate");
  mode.validate();

  std::vector<ActionType> gmv_actions;
  for (ActionType a : kAllActions) {
    if (table.has(a)) gmv_actions.push_back(a);
  }

  ReplayReport report;
  report.pages = pages.size();
  report.per_page_reward.reserve(pages.size());
  double total = 0.0;
  for (std::size_t idx = 0; idx < pages.size(); ++idx) {
    const PageLog& page = pages[idx];
    const std::vector<int> pi = strategy(page, idx);
    const double r = offline_page_reward(page, pi, table, mode, scheme);
    report.per_page_reward.push_back(r);
    total += r;
    for (const Slot& s : page.slots) {
      for (ActionType a : gmv_actions) {
        report.total_gmv += monetized_value(s.flags, s.item, table, a);
      }
    }
  }
  report.mean_offline_reward = total / static_cast<double>(pages.size());
  report.gmv_per_page = report.total_gmv / static_cast<double>(pages.size());
  return report;
}

std::string ReplayReport::to_json() const {
  json doc;
  doc["pages"] = pages;
  doc["mean_offline_reward"] = mean_offline_reward;
  doc["total_gmv"] = total_gmv;
  doc["gmv_per_page"] = gmv_per_page;
  return doc.dump();
}

void ReplayReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write report csv: " + path);
  out.precision(17);
  out << "page,offline_reward\n";
  for (std::size_t i = 0; i < per_page_reward.size(); ++i) {
    out << i << ',' << per_page_reward[i] << '\n';
  }
}

ReplayContext::ReplayContext(std::span<const PageLog> pages, const XvrTable& table,
                             const RewardMode& mode, WeightScheme scheme,
                             ScoreMode score_mode, std::size_t t_max)
    : state_dim_(state_dim(t_max)), score_mode_(score_mode), scheme_(scheme) {
  mode.validate();
  pages_.reserve(pages.size());
  for (const PageLog& page : pages) {
    PageData data;
    data.state = build_state(page, t_max);
    data.inputs.reserve(page.size());
    data.rewards.reserve(page.size());
    for (const Slot& s : page.slots) {
      data.inputs.push_back(make_score_inputs(s.item, table, score_mode));
      data.rewards.push_back(item_reward(s.flags, s.item, table, mode));
    }
    pages_.push_back(std::move(data));
  }
}

std::vector<double> ReplayContext::state_column_rms() const {
  std::vector<double> acc(state_dim_, 0.0);
  for (const PageData& page : pages_) {
    for (std::size_t c = 0; c < state_dim_; ++c) {
      acc[c] += page.state[c] * page.state[c];
    }
  }
  const double n = pages_.empty() ? 1.0 : static_cast<double>(pages_.size());
  for (double& v : acc) {
    v = std::sqrt(v / n);
    if (v == 0.0) v = 1.0;
  }
  return acc;
}

double ReplayContext::page_value(const PageData& page,
                                 const ActionCoefficients& coeffs) const {
  std::vector<double> scores(page.inputs.size());
  for (std::size_t i = 0; i < page.inputs.size(); ++i) {
    scores[i] = score_from_inputs(page.inputs[i], coeffs, score_mode_);
  }
  const std::vector<int> pi = permutation_from_scores(scores);
  double r = 0.0;
  for (std::size_t i = 0; i < page.rewards.size(); ++i) {
    r += page.rewards[i] * position_weight(scheme_, pi[i]);
  }
  return r;
}

double ReplayContext::mean_reward_params(std::span<const double> params,
                                         double clamp) const {
  double total = 0.0;
  for (const PageData& page : pages_) {
    total += page_value(page, apply_linear(params, state_dim_, clamp, page.state));
  }
  return pages_.empty() ? 0.0 : total / static_cast<double>(pages_.size());
}

double ReplayContext::mean_reward_params(
    std::span<const double> params, double clamp,
    std::span<const std::size_t> page_indices) const {
  double total = 0.0;
  for (std::size_t idx : page_indices) {
    const PageData& page = pages_.at(idx);
    total += page_value(page, apply_linear(params, state_dim_, clamp, page.state));
  }
  return page_indices.empty() ? 0.0
                              : total / static_cast<double>(page_indices.size());
}

double ReplayContext::mean_reward_fixed(const ActionCoefficients& coeffs) const {
  double total = 0.0;
  for (const PageData& page : pages_) total += page_value(page, coeffs);
  return pages_.empty() ? 0.0 : total / static_cast<double>(pages_.size());
}

double ReplayContext::mean_reward_fixed(
    const ActionCoefficients& coeffs,
    std::span<const std::size_t> page_indices) const {
  double total = 0.0;
  for (std::size_t idx : page_indices) total += page_value(pages_.at(idx), coeffs);
  return page_indices.empty() ? 0.0
                              : total / static_cast<double>(page_indices.size());
}

}  // namespace vrec
