#include "vrec/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vrec {

ActionCoefficients ActionCoefficients::clamped(std::span<const double> raw,
                                               double bound) {
  if (raw.size() != static_cast<std::size_t>(kCount)) {
    throw ValidationError("expected 7 coefficient values, got " +
                          std::to_string(raw.size()));
  }
  ActionCoefficients c;
  for (int i = 0; i < kCount; ++i) {
    const double v = raw[i];
    if (!std::isfinite(v)) {
      throw NumericError("non-finite coefficient at index " + std::to_string(i));
    }
    c[i] = std::clamp(v, -bound, bound);
  }
  return c;
}

void ActionCoefficients::validate(double bound) const {
  for (int i = 0; i < kCount; ++i) {
    const double v = (*this)[i];
    if (!std::isfinite(v) || v < -bound || v > bound) {
      throw ValidationError("coefficient " + std::to_string(i) +
                            " outside [-" + std::to_string(bound) + ", " +
                            std::to_string(bound) + "]");
    }
  }
}

namespace {

inline double floored(double p) { return std::max(p, kProbabilityFloor); }

}  // namespace

ScoreInputs make_score_inputs(const ItemFeatures& item, const XvrTable& table,
                              ScoreMode mode) {
  ScoreInputs in;
  in.ctr = item.ctr;
  in.cvr = item.cvr;
  in.price = item.price;
  if (mode == ScoreMode::full) {
    if (!item.p_cart || !item.p_fav) {
      throw ValidationError(
          "full-mode rank score needs p_cart and p_fav on item '" +
          item.item_id + "'");
    }
    in.p_cart = *item.p_cart;
    in.p_fav = *item.p_fav;
    in.xvr_click = table.lookup(item.item_id, ActionType::Click);
    in.xvr_cart = table.lookup(item.item_id, ActionType::Cart);
    in.xvr_fav = table.lookup(item.item_id, ActionType::Wishlist);
  }
  return in;
}

double score_from_inputs(const ScoreInputs& in, const ActionCoefficients& coeffs,
                         ScoreMode mode) {
  const double price_term = std::pow(in.price, coeffs.gamma);
  if (mode == ScoreMode::click_only) {
    return std::pow(floored(in.ctr), coeffs.alpha_click) *
           std::pow(floored(in.cvr), coeffs.beta_click) * price_term;
  }
  const double click_term =
      std::pow(floored(in.ctr), coeffs.alpha_click) *
      std::pow(floored(in.xvr_click), coeffs.beta_click);
  const double cart_term =
      std::pow(floored(in.p_cart), coeffs.alpha_cart) *
      std::pow(floored(in.xvr_cart), coeffs.beta_cart);
  const double fav_term =
      std::pow(floored(in.p_fav), coeffs.alpha_fav) *
      std::pow(floored(in.xvr_fav), coeffs.beta_fav);
  return (click_term + cart_term + fav_term) * price_term;
}

double rankscore(const ItemFeatures& item, const XvrTable& table,
                 const ActionCoefficients& coeffs, ScoreMode mode) {
  return score_from_inputs(make_score_inputs(item, table, mode), coeffs, mode);
}

std::vector<int> permutation_from_scores(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  std::vector<int> pi(scores.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    pi[order[pos]] = static_cast<int>(pos);
  }
  return pi;
}

std::vector<int> rank_page(std::span<const ItemFeatures> items,
                           const XvrTable& table,
                           const ActionCoefficients& coeffs, ScoreMode mode) {
  if (items.empty()) throw ValidationError("cannot rank an empty page");
  std::vector<double> scores(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    scores[i] = rankscore(items[i], table, coeffs, mode);
  }
  return permutation_from_scores(scores);
}

bool is_permutation(std::span<const int> pi) {
  std::vector<bool> seen(pi.size(), false);
  for (int p : pi) {
    if (p < 0 || static_cast<std::size_t>(p) >= pi.size() || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

}  // namespace vrec
