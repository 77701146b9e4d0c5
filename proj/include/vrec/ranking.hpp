#pragma once

#include <span>
#include <vector>

#include "vrec/types.hpp"
#include "vrec/xvr.hpp"

namespace vrec {

inline constexpr double kDefaultCoefficientBound = 5.0;
inline constexpr double kProbabilityFloor = 1e-6;

// Exponent vector of the power-law rank score. Values are kept inside a
// configurable bound so scores stay within floating-point range.
struct ActionCoefficients {
  double alpha_click = 0.0;
  double alpha_cart = 0.0;
  double alpha_fav = 0.0;
  double beta_click = 0.0;
  double beta_cart = 0.0;
  double beta_fav = 0.0;
  double gamma = 0.0;

  static constexpr int kCount = 7;

  double operator[](int i) const {
    switch (i) {
      case 0: return alpha_click;
      case 1: return alpha_cart;
      case 2: return alpha_fav;
      case 3: return beta_click;
      case 4: return beta_cart;
      case 5: return beta_fav;
      case 6: return gamma;
    }
    throw std::out_of_range("coefficient index");
  }
  double& operator[](int i) {
    switch (i) {
      case 0: return alpha_click;
      case 1: return alpha_cart;
      case 2: return alpha_fav;
      case 3: return beta_click;
      case 4: return beta_cart;
      case 5: return beta_fav;
      case 6: return gamma;
    }
    throw std::out_of_range("coefficient index");
  }

  // Clamps raw values into [-bound, bound]; non-finite input is an error.
  static ActionCoefficients clamped(std::span<const double> raw, double bound);

  void validate(double bound) const;

  bool operator==(const ActionCoefficients&) const = default;
};

enum class ScoreMode { click_only, full };

inline const char* score_mode_name(ScoreMode m) {
  return m == ScoreMode::click_only ? "click_only" : "full";
}

inline ScoreMode score_mode_from_name(const std::string& name) {
  if (name == "click_only") return ScoreMode::click_only;
  if (name == "full") return ScoreMode::full;
  throw ValidationError("unknown score mode: " + name);
}

// Per-item inputs of the rank score, extracted once so batched evaluation
// paths compute exactly the same arithmetic as rankscore().
struct ScoreInputs {
  double ctr = 0.0;
  double cvr = 0.0;
  double price = 1.0;
  double p_cart = 0.0;
  double p_fav = 0.0;
  double xvr_click = 0.0;
  double xvr_cart = 0.0;
  double xvr_fav = 0.0;
};

// Builds score inputs for an item. click_only mode touches neither the
// table nor p_cart/p_fav; full mode requires both optional probabilities
// and table slices for click, cart and wishlist.
ScoreInputs make_score_inputs(const ItemFeatures& item, const XvrTable& table,
                              ScoreMode mode);

double score_from_inputs(const ScoreInputs& in, const ActionCoefficients& coeffs,
                         ScoreMode mode);

// Power-law rank score.
//   click_only:  ctr^alpha_click * cvr^beta_click * price^gamma
//   full:        sum over x in {click, cart, fav} of
//                P(x,i)^alpha_x * xvr(i,x)^beta_x * price^gamma
// Probabilities are floored at kProbabilityFloor before exponentiation.
// Full mode requires p_cart and p_fav on the item and an XvrTable covering
// click, cart and wishlist.
double rankscore(const ItemFeatures& item, const XvrTable& table,
                 const ActionCoefficients& coeffs, ScoreMode mode);

// Ranks a page: result[i] = k means item i is placed at position k
// (0-indexed, 0 = top of the cascade). Positions follow descending rank
// score; ties keep the original slot order.
std::vector<int> rank_page(std::span<const ItemFeatures> items,
                           const XvrTable& table,
                           const ActionCoefficients& coeffs, ScoreMode mode);

// Shared helper: permutation (slot -> position) from per-slot scores,
// descending, stable on ties.
std::vector<int> permutation_from_scores(std::span<const double> scores);

bool is_permutation(std::span<const int> pi);

}  // namespace vrec
