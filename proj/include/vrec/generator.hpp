#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vrec/ranking.hpp"
#include "vrec/types.hpp"

namespace vrec {

// Synthetic log generator. Produces pages whose click flags are biased
// toward items with a high planted-preference rank score, with cart,
// wishlist and purchase flags drawn down-funnel of clicks. Conditional
// rates are calibrated analytically so aggregate action counts land on the
// configured targets in expectation.
struct GeneratorConfig {
  int num_users = 1000;
  int num_items = 400;       // catalog size; items recur across pages
  int items_per_page = 10;   // T
  int num_pages = 10000;

  // Aggregate targets. Defaults follow the benchmark's action-count
  // ratios: 670 clicks per 500 requests, carts:clicks 60:670,
  // wishlists:clicks 30:670, purchases:clicks 3:670.
  double clicks_per_page = 670.0 / 500.0;
  double cart_given_click = 60.0 / 670.0;
  double fav_given_click = 30.0 / 670.0;
  double pay_given_click = 3.0 / 670.0;

  // Purchase-power segment mix (level = index) and the per-level purchase
  // multiplier slope: higher power buys more.
  std::vector<double> purchase_power_mix = {0.3, 0.5, 0.2};
  double power_pay_boost = 0.6;

  // Unit prices are log-normal.
  double price_log_mu = 3.0;
  double price_log_sigma = 0.6;

  // Click probabilities are proportional to this click-only rank score of
  // the displayed features, so a recoverable ranking optimum exists.
  ActionCoefficients planted_preference = planted_default();

  // Per-item cart/wishlist affinity spread (log-normal sigma) and how much
  // a cart raises the subsequent purchase probability. With boost > 1 cart
  // flags carry purchase signal.
  double affinity_spread = 0.6;
  double cart_pay_boost = 8.0;

  // Multiplicative jitter on displayed ctr/cvr predictions.
  double feature_noise = 0.1;

  std::uint64_t seed = 1;

  static ActionCoefficients planted_default() {
    ActionCoefficients c;
    c.alpha_click = 1.0;
    c.beta_click = 1.0;
    c.gamma = 0.0;
    return c;
  }

  void validate() const;
};

Dataset generate(const GeneratorConfig& config);

struct ActionCounts {
  long pages = 0;
  long slots = 0;
  long clicks = 0;
  long carts = 0;
  long wishlists = 0;
  long purchases = 0;
};

ActionCounts count_actions(const Dataset& data);

// Manifest with the empirical action rates of a generated dataset.
std::string manifest_json(const GeneratorConfig& config, const ActionCounts& counts);

}  // namespace vrec
