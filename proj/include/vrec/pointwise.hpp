#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vrec/types.hpp"

namespace vrec {

enum class RankerVariant { logistic, mlp };

const char* ranker_variant_name(RankerVariant v);
RankerVariant ranker_variant_from_name(const std::string& name);

// Input features per scored item: the RL state restricted to that item.
//   <age, gender, purchase_power, page_id, request_hour, ctr, cvr,
//    log(1+price)>
inline constexpr int kPointwiseFeatureCount = 8;
inline constexpr int kMlpHidden1 = 32;
inline constexpr int kMlpHidden2 = 16;

using FeatureRow = std::array<double, kPointwiseFeatureCount>;

FeatureRow pointwise_features(const RequestContext& context,
                              const ItemFeatures& item);

// Per-feature min-max scaling fitted on the training set.
struct FeatureScaler {
  FeatureRow lo{};
  FeatureRow hi{};

  void fit(std::span<const FeatureRow> rows);
  FeatureRow transform(const FeatureRow& row) const;
};

struct PointwiseConfig {
  RankerVariant variant = RankerVariant::logistic;
  double l2_weight = 0.0;
  double learning_rate = 0.5;
  int batch_size = 128;
  int epochs = 8;
  std::uint64_t seed = 0;

  // <l2, learning rate, batch size> = <0, 0.5, 128>
  static PointwiseConfig logistic_defaults() { return PointwiseConfig{}; }

  // <l2, learning rate, batch size> = <0, 0.05, 1024>, hidden layers 32/16
  static PointwiseConfig mlp_defaults() {
    PointwiseConfig c;
    c.variant = RankerVariant::mlp;
    c.learning_rate = 0.05;
    c.batch_size = 1024;
    c.epochs = 20;
    return c;
  }

  void validate() const;
};

std::size_t pointwise_param_count(RankerVariant variant);

// Raw score (logit) of one scaled feature row.
double pointwise_logit(RankerVariant variant, std::span<const double> params,
                       const FeatureRow& x);

// Weighted logistic loss of one example, y in {0,1}:
//   weight * (softplus(z) - y*z)
double pointwise_example_loss(RankerVariant variant, std::span<const double> params,
                              const FeatureRow& x, double y, double weight);

// Accumulates d(loss)/d(params) for one example into grad.
void pointwise_example_grad(RankerVariant variant, std::span<const double> params,
                            const FeatureRow& x, double y, double weight,
                            std::span<double> grad);

// Pointwise learning-to-rank classifier. Positives are clicked-or-purchased
// slots, negatives the remaining impressions; each example's loss is
// weighted by log(1+price).
class PointwiseRanker {
 public:
  static PointwiseRanker train(const Dataset& data, const PointwiseConfig& config);

  // Classifier probability for one item in its request context.
  double score(const RequestContext& context, const ItemFeatures& item) const;

  std::vector<int> rank(const PageLog& page) const;

  RankerVariant variant() const { return variant_; }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& mutable_params() { return params_; }
  const std::vector<double>& epoch_loss() const { return epoch_loss_; }
  const FeatureScaler& scaler() const { return scaler_; }

  std::string to_json() const;
  static PointwiseRanker from_json(const std::string& text);
  void save(const std::string& path) const;
  static PointwiseRanker load(const std::string& path);

 private:
  RankerVariant variant_ = RankerVariant::logistic;
  std::vector<double> params_;
  FeatureScaler scaler_;
  std::vector<double> epoch_loss_;

  friend PointwiseRanker make_pointwise_for_test(RankerVariant,
                                                 std::vector<double>,
                                                 FeatureScaler);
};

// Test hook: builds a ranker from explicit parameters.
PointwiseRanker make_pointwise_for_test(RankerVariant variant,
                                        std::vector<double> params,
                                        FeatureScaler scaler);

}  // namespace vrec
