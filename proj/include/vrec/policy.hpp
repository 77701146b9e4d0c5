#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vrec/es.hpp"
#include "vrec/ranking.hpp"
#include "vrec/replay.hpp"
#include "vrec/reward.hpp"
#include "vrec/state.hpp"
#include "vrec/types.hpp"
#include "vrec/xvr.hpp"

namespace vrec {

// Applies a flat linear map (7 x state_dim weights, then 7 biases) to a
// state and clamps each output into [-clamp, clamp]. Shared by LinearPolicy
// and the batched training path so both produce identical arithmetic.
ActionCoefficients apply_linear(std::span<const double> params,
                                std::size_t state_dim, double clamp,
                                std::span<const double> state);

// Linear state -> coefficient policy.
struct LinearPolicy {
  std::size_t state_dim = 0;
  double clamp = kDefaultCoefficientBound;
  std::vector<double> params;  // weights row-major, biases last

  static LinearPolicy zeros(std::size_t state_dim,
                            double clamp = kDefaultCoefficientBound);

  std::size_t param_count() const {
    return static_cast<std::size_t>(ActionCoefficients::kCount) * state_dim +
           ActionCoefficients::kCount;
  }

  double weight(int row, std::size_t col) const {
    return params[static_cast<std::size_t>(row) * state_dim + col];
  }
  double& weight(int row, std::size_t col) {
    return params[static_cast<std::size_t>(row) * state_dim + col];
  }
  double bias(int row) const {
    return params[static_cast<std::size_t>(ActionCoefficients::kCount) * state_dim +
                  row];
  }
  double& bias(int row) {
    return params[static_cast<std::size_t>(ActionCoefficients::kCount) * state_dim +
                  row];
  }

  ActionCoefficients apply(std::span<const double> state) const {
    return apply_linear(params, state_dim, clamp, state);
  }

  void validate() const;
};

ActionCoefficients apply_policy(const LinearPolicy& policy,
                                const StateVector& state);

// Mean offline page reward of a policy over a page batch:
// build_state -> apply_policy -> rank_page -> offline_page_reward.
double evaluate_policy(const LinearPolicy& policy, std::span<const PageLog> pages,
                       const XvrTable& table, const RewardMode& mode,
                       WeightScheme scheme, ScoreMode score_mode,
                       std::size_t t_max);

struct TrainOptions {
  EsConfig es;
  int pages_per_iteration = 200;
  std::size_t t_max = 10;
  ScoreMode score_mode = ScoreMode::click_only;
  RewardMode reward_mode = RewardMode::click_pay();
  WeightScheme scheme = WeightScheme::exp_decay;
  double clamp = kDefaultCoefficientBound;

  void validate() const;
};

struct TrainCurvePoint {
  int iteration = 0;
  double mean_reward = 0.0;
  double max_reward = 0.0;
};

struct TrainResult {
  LinearPolicy policy;
  std::vector<TrainCurvePoint> curve;
};

// ES training loop. Starts from the all-zero policy (which ranks every
// item equally), samples pages_per_iteration pages without replacement per
// epoch, and runs one es_step per iteration on the sampled batch.
TrainResult train_policy(const Dataset& data, const XvrTable& table,
                         const TrainOptions& options);

// Ranking strategy backed by a policy (copied into the strategy). The table
// must outlive the returned strategy.
RankStrategy policy_strategy(const LinearPolicy& policy, const XvrTable& table,
                             ScoreMode mode, std::size_t t_max);

// Checkpoint I/O. Versioned JSON:
//   {"version": 1, "state_dim": int, "t_max": int, "weights": [[...]],
//    "bias": [...], "clamp": float, "config": {...}, "iteration": int}
struct Checkpoint {
  LinearPolicy policy;
  std::size_t t_max = 0;
  int iteration = 0;
  std::string config_json;  // training configuration, verbatim
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(const std::string& text);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

void save_curve_csv(std::span<const TrainCurvePoint> curve, const std::string& path);

}  // namespace vrec
