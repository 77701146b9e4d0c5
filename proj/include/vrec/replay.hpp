#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vrec/ranking.hpp"
#include "vrec/reward.hpp"
#include "vrec/state.hpp"
#include "vrec/types.hpp"
#include "vrec/xvr.hpp"

namespace vrec {

// A ranking strategy maps a logged page (and its index in the evaluation
// batch, for seeded strategies) to a slot -> position permutation.
using RankStrategy =
    std::function<std::vector<int>(const PageLog&, std::size_t page_index)>;

RankStrategy logged_order_strategy();
RankStrategy seeded_random_strategy(std::uint64_t seed);

// Upper-bound strategy: sorts slots by realized item reward, descending.
// The table must outlive the returned strategy.
RankStrategy oracle_strategy(const XvrTable& table, RewardMode mode);

RankStrategy fixed_coefficients_strategy(const ActionCoefficients& coeffs,
                                         const XvrTable& table, ScoreMode mode);

struct ReplayReport {
  double mean_offline_reward = 0.0;
  double total_gmv = 0.0;      // Over logged flags and all actions the table covers.
  double gmv_per_page = 0.0;
  std::size_t pages = 0;
  std::vector<double> per_page_reward;

  std::string to_json() const;
  void write_csv(const std::string& path) const;
};

// Scores a ranking strategy against logged pages by reweighting logged
// rewards with position weights. Deterministic for deterministic strategies.
ReplayReport replay_evaluate(const RankStrategy& strategy,
                             std::span<const PageLog> pages, const XvrTable& table,
                             const RewardMode& mode, WeightScheme scheme);

// Precomputed evaluation context: states, score inputs and realized item
// rewards are extracted once so repeated coefficient evaluations (ES
// populations, grid searches) only pay for scoring and sorting. Produces
// arithmetic identical to the unbatched path.
class ReplayContext {
 public:
  ReplayContext(std::span<const PageLog> pages, const XvrTable& table,
                const RewardMode& mode, WeightScheme scheme, ScoreMode score_mode,
                std::size_t t_max);

  std::size_t page_count() const { return pages_.size(); }
  std::size_t state_dimension() const { return state_dim_; }

  // Root-mean-square of every state coordinate over the held pages.
  // Zero-valued columns report 1 so they can be used as divisors.
  std::vector<double> state_column_rms() const;

  // Mean offline reward with coefficients produced per page from a flat
  // linear parameter vector (see apply_linear).
  double mean_reward_params(std::span<const double> params, double clamp) const;
  double mean_reward_params(std::span<const double> params, double clamp,
                            std::span<const std::size_t> page_indices) const;

  // Mean offline reward under one fixed coefficient vector.
  double mean_reward_fixed(const ActionCoefficients& coeffs) const;
  double mean_reward_fixed(const ActionCoefficients& coeffs,
                           std::span<const std::size_t> page_indices) const;

 private:
  struct PageData {
    StateVector state;
    std::vector<ScoreInputs> inputs;
    std::vector<double> rewards;
  };

  double page_value(const PageData& page, const ActionCoefficients& coeffs) const;

  std::vector<PageData> pages_;
  std::size_t state_dim_ = 0;
  ScoreMode score_mode_;
  WeightScheme scheme_;
};

}  // namespace vrec
