#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vrec/es.hpp"
#include "vrec/generator.hpp"
#include "vrec/item_cf.hpp"
#include "vrec/metrics.hpp"
#include "vrec/pointwise.hpp"
#include "vrec/ranking.hpp"
#include "vrec/reward.hpp"
#include "vrec/split.hpp"

namespace vrec {

// One configuration tree drives every command; command-line flags override
// individual keys. Seeds are always explicit constants.
struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t t_max = 10;

  struct Paths {
    std::string data;
    std::string manifest;
    std::string xvr_dir;
    std::string checkpoint;
    std::string curve;
    std::string report;
    std::string per_page;
    std::string models_dir;
    std::string compare;
  } paths;

  GeneratorConfig generator;

  double xvr_pseudo_count = 10.0;
  std::vector<std::string> xvr_actions = {"click", "cart", "wishlist"};

  RewardMode reward_mode = RewardMode::click_pay();
  WeightScheme weight_scheme = WeightScheme::exp_decay;
  ScoreMode score_mode = ScoreMode::click_only;
  double coefficient_clamp = kDefaultCoefficientBound;

  EsConfig es;
  int pages_per_iteration = 200;

  SplitConfig split;

  int eval_k = 20;
  RelevanceRule relevance = RelevanceRule::clicked_or_purchased;

  ItemCfConfig item_cf;
  PointwiseConfig logistic = PointwiseConfig::logistic_defaults();
  PointwiseConfig mlp = PointwiseConfig::mlp_defaults();

  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string to_json_text() const;
};

}  // namespace vrec
