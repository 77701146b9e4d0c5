#include "vrec/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "vrec/ranking.hpp"
#include "vrec/rng.hpp"

namespace vrec {

using nlohmann::json;

const char* ranker_variant_name(RankerVariant v) {
  return v == RankerVariant::logistic ? "logistic" : "mlp";
}

RankerVariant ranker_variant_from_name(const std::string& name) {
  if (name == "logistic") return RankerVariant::logistic;
  if (name == "mlp") return RankerVariant::mlp;
  throw ValidationError("unknown ranker variant: " + name);
}

FeatureRow pointwise_features(const RequestContext& context,
                              const ItemFeatures& item) {
  return {static_cast<double>(context.age),
          static_cast<double>(context.gender),
          static_cast<double>(context.purchase_power),
          static_cast<double>(context.page_id),
          static_cast<double>(context.request_hour),
          item.ctr,
          item.cvr,
          std::log1p(item.price)};
}

void FeatureScaler::fit(std::span<const FeatureRow> rows) {
  if (rows.empty()) throw ValidationError("scaler: no rows to fit");
  lo = rows.front();
  hi = rows.front();
  for (const FeatureRow& r : rows) {
    for (int i = 0; i < kPointwiseFeatureCount; ++i) {
      lo[i] = std::min(lo[i], r[i]);
      hi[i] = std::max(hi[i], r[i]);
    }
  }
}

FeatureRow FeatureScaler::transform(const FeatureRow& row) const {
  FeatureRow out;
  for (int i = 0; i < kPointwiseFeatureCount; ++i) {
    const double span = hi[i] - lo[i];
    out[i] = span > 0.0 ? (row[i] - lo[i]) / span : 0.0;
  }
  return out;
}

void PointwiseConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ValidationError("pointwise: bad learning rate");
  if (l2_weight < 0.0) throw ValidationError("pointwise: negative l2 weight");
  if (batch_size < 1) throw ValidationError("pointwise: batch size must be >= 1");
  if (epochs < 0) throw ValidationError("pointwise: epochs must be >= 0");
}

std::size_t pointwise_param_count(RankerVariant variant) {
  if (variant == RankerVariant::logistic) {
    return kPointwiseFeatureCount + 1;
  }
  return static_cast<std::size_t>(kMlpHidden1) * kPointwiseFeatureCount +
         kMlpHidden1 + static_cast<std::size_t>(kMlpHidden2) * kMlpHidden1 +
         kMlpHidden2 + kMlpHidden2 + 1;
}

namespace {

// MLP parameter layout offsets.
constexpr std::size_t kW1 = 0;
constexpr std::size_t kB1 = kW1 + static_cast<std::size_t>(kMlpHidden1) * kPointwiseFeatureCount;
constexpr std::size_t kW2 = kB1 + kMlpHidden1;
constexpr std::size_t kB2 = kW2 + static_cast<std::size_t>(kMlpHidden2) * kMlpHidden1;
constexpr std::size_t kW3 = kB2 + kMlpHidden2;
constexpr std::size_t kB3 = kW3 + kMlpHidden2;

struct MlpActivations {
  std::array<double, kMlpHidden1> h1;
  std::array<double, kMlpHidden2> h2;
  double z = 0.0;
};

MlpActivations mlp_forward(std::span<const double> p, const FeatureRow& x) {
  MlpActivations act;
  for (int i = 0; i < kMlpHidden1; ++i) {
    double a = p[kB1 + i];
    const double* w = p.data() + kW1 + static_cast<std::size_t>(i) * kPointwiseFeatureCount;
    for (int j = 0; j < kPointwiseFeatureCount; ++j) a += w[j] * x[j];
    act.h1[i] = a > 0.0 ? a : 0.0;
  }
  for (int i = 0; i < kMlpHidden2; ++i) {
    double a = p[kB2 + i];
    const double* w = p.data() + kW2 + static_cast<std::size_t>(i) * kMlpHidden1;
    for (int j = 0; j < kMlpHidden1; ++j) a += w[j] * act.h1[j];
    act.h2[i] = a > 0.0 ? a : 0.0;
  }
  act.z = p[kB3];
  for (int j = 0; j < kMlpHidden2; ++j) act.z += p[kW3 + j] * act.h2[j];
  return act;
}

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

inline double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

double pointwise_logit(RankerVariant variant, std::span<const double> params,
                       const FeatureRow& x) {
  if (params.size() != pointwise_param_count(variant)) {
    throw ValidationError("pointwise: parameter vector has wrong size");
  }
  if (variant == RankerVariant::logistic) {
    double z = params[kPointwiseFeatureCount];
    for (int j = 0; j < kPointwiseFeatureCount; ++j) z += params[j] * x[j];
    return z;
  }
  return mlp_forward(params, x).z;
}

double pointwise_example_loss(RankerVariant variant, std::span<const double> params,
                              const FeatureRow& x, double y, double weight) {
  const double z = pointwise_logit(variant, params, x);
  return weight * (softplus(z) - y * z);
}

void pointwise_example_grad(RankerVariant variant, std::span<const double> params,
                            const FeatureRow& x, double y, double weight,
                            std::span<double> grad) {
  if (grad.size() != params.size()) {
    throw ValidationError("pointwise: gradient vector has wrong size");
  }
  if (variant == RankerVariant::logistic) {
    const double z = pointwise_logit(variant, params, x);
    const double dz = weight * (sigmoid(z) - y);
    for (int j = 0; j < kPointwiseFeatureCount; ++j) grad[j] += dz * x[j];
    grad[kPointwiseFeatureCount] += dz;
    return;
  }
  const MlpActivations act = mlp_forward(params, x);
  const double dz = weight * (sigmoid(act.z) - y);
  std::array<double, kMlpHidden2> dh2;
  for (int i = 0; i < kMlpHidden2; ++i) {
    grad[kW3 + i] += dz * act.h2[i];
    dh2[i] = act.h2[i] > 0.0 ? dz * params[kW3 + i] : 0.0;
  }
  grad[kB3] += dz;
  std::array<double, kMlpHidden1> dh1{};
  for (int i = 0; i < kMlpHidden2; ++i) {
    if (dh2[i] == 0.0) continue;
    double* gw = grad.data() + kW2 + static_cast<std::size_t>(i) * kMlpHidden1;
    const double* w = params.data() + kW2 + static_cast<std::size_t>(i) * kMlpHidden1;
    for (int j = 0; j < kMlpHidden1; ++j) {
      gw[j] += dh2[i] * act.h1[j];
      dh1[j] += dh2[i] * w[j];
    }
    grad[kB2 + i] += dh2[i];
  }
  for (int i = 0; i < kMlpHidden1; ++i) {
    if (act.h1[i] <= 0.0 || dh1[i] == 0.0) continue;
    double* gw = grad.data() + kW1 + static_cast<std::size_t>(i) * kPointwiseFeatureCount;
    for (int j = 0; j < kPointwiseFeatureCount; ++j) gw[j] += dh1[i] * x[j];
    grad[kB1 + i] += dh1[i];
  }
}

PointwiseRanker PointwiseRanker::train(const Dataset& data,
                                       const PointwiseConfig& config) {
  config.validate();
  std::vector<FeatureRow> rows;
  std::vector<double> labels;
  std::vector<double> weights;
  for (const PageLog& page : data.pages) {
    for (const Slot& s : page.slots) {
      rows.push_back(pointwise_features(page.context, s.item));
      labels.push_back(s.flags.clicked || s.flags.purchased ? 1.0 : 0.0);
      weights.push_back(std::log1p(s.item.price));
    }
  }
  if (rows.empty()) throw ValidationError("pointwise: no training examples");
  const double positives = std::accumulate(labels.begin(), labels.end(), 0.0);
  if (positives == 0.0 || positives == static_cast<double>(labels.size())) {
    throw ValidationError("pointwise: training data has a single class");
  }

  PointwiseRanker model;
  model.variant_ = config.variant;
  model.scaler_.fit(rows);
  for (FeatureRow& r : rows) r = model.scaler_.transform(r);

  const std::size_t dim = pointwise_param_count(config.variant);
  model.params_.assign(dim, 0.0);
  Rng rng(derive_seed(config.seed, 0x9077));
  if (config.variant == RankerVariant::mlp) {
    const double s1 = std::sqrt(2.0 / kPointwiseFeatureCount);
    const double s2 = std::sqrt(2.0 / kMlpHidden1);
    const double s3 = std::sqrt(2.0 / kMlpHidden2);
    for (std::size_t i = kW1; i < kB1; ++i) model.params_[i] = s1 * rng.normal();
    for (std::size_t i = kW2; i < kB2; ++i) model.params_[i] = s2 * rng.normal();
    for (std::size_t i = kW3; i < kB3; ++i) model.params_[i] = s3 * rng.normal();
  }

  const std::size_t n = rows.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(dim);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t j = n; j > 1; --j) {
      std::swap(order[j - 1], order[rng.uniform_int(static_cast<int>(j))]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        epoch_loss += pointwise_example_loss(config.variant, model.params_,
                                             rows[i], labels[i], weights[i]);
        pointwise_example_grad(config.variant, model.params_, rows[i], labels[i],
                               weights[i], grad);
      }
      const double scale = config.learning_rate / static_cast<double>(end - start);
      for (std::size_t d = 0; d < dim; ++d) {
        model.params_[d] -= scale * grad[d] +
                            config.learning_rate * config.l2_weight * model.params_[d];
      }
    }
    model.epoch_loss_.push_back(epoch_loss / static_cast<double>(n));
  }
  return model;
}

double PointwiseRanker::score(const RequestContext& context,
                              const ItemFeatures& item) const {
  const FeatureRow x = scaler_.transform(pointwise_features(context, item));
  return sigmoid(pointwise_logit(variant_, params_, x));
}

std::vector<int> PointwiseRanker::rank(const PageLog& page) const {
  std::vector<double> scores(page.size());
  for (std::size_t i = 0; i < page.size(); ++i) {
    scores[i] = score(page.context, page.slots[i].item);
  }
  return permutation_from_scores(scores);
}

std::string PointwiseRanker::to_json() const {
  json doc;
  doc["model"] = "pointwise";
  doc["variant"] = ranker_variant_name(variant_);
  doc["params"] = params_;
  doc["scaler"] = {{"lo", scaler_.lo}, {"hi", scaler_.hi}};
  doc["epoch_loss"] = epoch_loss_;
  return doc.dump();
}

PointwiseRanker PointwiseRanker::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed pointwise JSON: ") + e.what());
  }
  if (doc.at("model").get<std::string>() != "pointwise") {
    throw ValidationError("not a pointwise model file");
  }
  PointwiseRanker model;
  model.variant_ = ranker_variant_from_name(doc.at("variant").get<std::string>());
  model.params_ = doc.at("params").get<std::vector<double>>();
  if (model.params_.size() != pointwise_param_count(model.variant_)) {
    throw ValidationError("pointwise: parameter vector has wrong size");
  }
  const auto lo = doc.at("scaler").at("lo").get<std::vector<double>>();
  const auto hi = doc.at("scaler").at("hi").get<std::vector<double>>();
  if (lo.size() != kPointwiseFeatureCount || hi.size() != kPointwiseFeatureCount) {
    throw ValidationError("pointwise: scaler has wrong size");
  }
  std::copy(lo.begin(), lo.end(), model.scaler_.lo.begin());
  std::copy(hi.begin(), hi.end(), model.scaler_.hi.begin());
  if (doc.contains("epoch_loss")) {
    model.epoch_loss_ = doc.at("epoch_loss").get<std::vector<double>>();
  }
  return model;
}

void PointwiseRanker::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write model file: " + path);
  out << to_json() << '\n';
}

PointwiseRanker PointwiseRanker::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

PointwiseRanker make_pointwise_for_test(RankerVariant variant,
                                        std::vector<double> params,
                                        FeatureScaler scaler) {
  PointwiseRanker model;
  model.variant_ = variant;
  model.params_ = std::move(params);
  model.scaler_ = scaler;
  return model;
}

}  // namespace vrec
