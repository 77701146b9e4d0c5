#include "vrec/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace vrec {

using nlohmann::json;

ActionCoefficients apply_linear(std::span<const double> params,
                                std::size_t state_dim, double clamp,
                                std::span<const double> state) {
  constexpr int rows = ActionCoefficients::kCount;
  if (state.size() != state_dim) {
    throw ValidationError("state dimension " + std::to_string(state.size()) +
                          " does not match policy dimension " +
                          std::to_string(state_dim));
  }
  if (params.size() != rows * state_dim + rows) {
    throw ValidationError("policy parameter vector has wrong size");
  }
  ActionCoefficients out;
  const double* bias = params.data() + rows * state_dim;
  for (int r = 0; r < rows; ++r) {
    const double* w = params.data() + static_cast<std::size_t>(r) * state_dim;
    double acc = 0.0;
    for (std::size_t c = 0; c < state_dim; ++c) acc += w[c] * state[c];
    acc += bias[r];
    if (!std::isfinite(acc)) {
      throw NumericError("non-finite policy output at coefficient " +
                         std::to_string(r));
    }
    out[r] = std::clamp(acc, -clamp, clamp);
  }
  return out;
}

LinearPolicy LinearPolicy::zeros(std::size_t state_dim, double clamp) {
  LinearPolicy p;
  p.state_dim = state_dim;
  p.clamp = clamp;
  p.params.assign(static_cast<std::size_t>(ActionCoefficients::kCount) * state_dim +
                      ActionCoefficients::kCount,
                  0.0);
  return p;
}

void LinearPolicy::validate() const {
  if (params.size() != param_count()) {
    throw ValidationError("policy parameter vector has wrong size");
  }
  if (!(clamp > 0.0)) throw ValidationError("policy clamp must be > 0");
  for (double p : params) {
    if (!std::isfinite(p)) throw ValidationError("policy has non-finite parameters");
  }
}

ActionCoefficients apply_policy(const LinearPolicy& policy,
                                const StateVector& state) {
  return policy.apply(state);
}

double evaluate_policy(const LinearPolicy& policy, std::span<const PageLog> pages,
                       const XvrTable& table, const RewardMode& mode,
                       WeightScheme scheme, ScoreMode score_mode,
                       std::size_t t_max) {
  if (pages.empty()) throw ValidationError("evaluate_policy: empty batch");
  double total = 0.0;
  for (const PageLog& page : pages) {
    const StateVector state = build_state(page, t_max);
    const ActionCoefficients coeffs = apply_policy(policy, state);
    std::vector<ItemFeatures> items;
    items.reserve(page.size());
    for (const Slot& s : page.slots) items.push_back(s.item);
    const std::vector<int> pi = rank_page(items, table, coeffs, score_mode);
    total += offline_page_reward(page, pi, table, mode, scheme);
  }
  return total / static_cast<double>(pages.size());
}

void TrainOptions::validate() const {
  es.validate();
  if (pages_per_iteration < 1) {
    throw ValidationError("pages_per_iteration must be >= 1");
  }
  if (t_max < 1 || t_max > kMaxPageSlots) {
    throw ValidationError("t_max must be in [1, 50]");
  }
  if (!(clamp > 0.0)) throw ValidationError("coefficient clamp must be > 0");
  reward_mode.validate();
}

TrainResult train_policy(const Dataset& data, const XvrTable& table,
                         const TrainOptions& options) {
  options.validate();
  if (data.pages.empty()) throw ValidationError("train: dataset has no pages");

  const ReplayContext context(data.pages, table, options.reward_mode,
                              options.scheme, options.score_mode, options.t_max);
  const std::size_t dim = context.state_dimension();
  constexpr int rows = ActionCoefficients::kCount;

  // The search runs in an RMS-normalized state parameterization so the
  // isotropic perturbations explore every feature on a comparable scale;
  // raw state coordinates (price especially) span several orders of
  // magnitude. The returned policy carries the folded raw-space weights.
  const std::vector<double> rms = context.state_column_rms();
  const std::size_t n_params = static_cast<std::size_t>(rows) * dim + rows;
  auto fold = [&](std::span<const double> scaled, std::span<double> effective) {
    for (int r = 0; r < rows; ++r) {
      const std::size_t off = static_cast<std::size_t>(r) * dim;
      for (std::size_t c = 0; c < dim; ++c) {
        effective[off + c] = scaled[off + c] / rms[c];
      }
    }
    for (int r = 0; r < rows; ++r) {
      effective[rows * dim + r] = scaled[rows * dim + r];
    }
  };

  TrainResult result;
  result.policy = LinearPolicy::zeros(dim, options.clamp);
  result.curve.reserve(options.es.iterations);

  std::vector<double> theta(n_params, 0.0);
  AdamState adam(n_params);
  Rng noise_rng(derive_seed(options.es.seed, 0x5e5));
  Rng batch_rng(derive_seed(options.es.seed, 0xba7c4));

  const std::size_t n_pages = data.pages.size();
  const std::size_t batch_size =
      std::min(static_cast<std::size_t>(options.pages_per_iteration), n_pages);

  // Pages are sampled without replacement within an epoch: a shuffled index
  // deck is consumed in batch-size chunks and reshuffled when exhausted.
  std::vector<std::size_t> deck(n_pages);
  std::iota(deck.begin(), deck.end(), 0);
  std::size_t cursor = n_pages;  // force initial shuffle

  std::vector<std::size_t> batch(batch_size);
  const double clamp = options.clamp;
  for (int t = 0; t < options.es.iterations; ++t) {
    for (std::size_t i = 0; i < batch_size; ++i) {
      if (cursor >= n_pages) {
        for (std::size_t j = n_pages; j > 1; --j) {
          std::swap(deck[j - 1], deck[batch_rng.uniform_int(static_cast<int>(j))]);
        }
        cursor = 0;
      }
      batch[i] = deck[cursor++];
    }
    const Objective objective = [&](std::span<const double> candidate) {
      std::vector<double> effective(n_params);
      fold(candidate, effective);
      return context.mean_reward_params(effective, clamp, batch);
    };
    const EsStepDiagnostics diag =
        es_step(theta, objective, options.es, adam, noise_rng);
    result.curve.push_back({t, diag.mean_reward, diag.max_reward});
  }
  fold(theta, result.policy.params);
  return result;
}

RankStrategy policy_strategy(const LinearPolicy& policy, const XvrTable& table,
                             ScoreMode mode, std::size_t t_max) {
  return [policy, &table, mode, t_max](const PageLog& page, std::size_t) {
    const StateVector state = build_state(page, t_max);
    const ActionCoefficients coeffs = policy.apply(state);
    std::vector<ItemFeatures> items;
    items.reserve(page.size());
    for (const Slot& s : page.slots) items.push_back(s.item);
    return rank_page(items, table, coeffs, mode);
  };
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  ckpt.policy.validate();
  json doc;
  doc["version"] = 1;
  doc["state_dim"] = ckpt.policy.state_dim;
  doc["t_max"] = ckpt.t_max;
  json weights = json::array();
  for (int r = 0; r < ActionCoefficients::kCount; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < ckpt.policy.state_dim; ++c) {
      row.push_back(ckpt.policy.weight(r, c));
    }
    weights.push_back(std::move(row));
  }
  doc["weights"] = std::move(weights);
  json bias = json::array();
  for (int r = 0; r < ActionCoefficients::kCount; ++r) {
    bias.push_back(ckpt.policy.bias(r));
  }
  doc["bias"] = std::move(bias);
  doc["clamp"] = ckpt.policy.clamp;
  doc["iteration"] = ckpt.iteration;
  doc["config"] = ckpt.config_json.empty() ? json::object()
                                           : json::parse(ckpt.config_json);
  return doc.dump();
}

Checkpoint parse_checkpoint(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed checkpoint JSON: ") + e.what());
  }
  if (doc.at("version").get<int>() != 1) {
    throw ValidationError("unsupported checkpoint version");
  }
  Checkpoint ckpt;
  const std::size_t dim = doc.at("state_dim").get<std::size_t>();
  ckpt.policy = LinearPolicy::zeros(dim, doc.at("clamp").get<double>());
  ckpt.t_max = doc.at("t_max").get<std::size_t>();
  ckpt.iteration = doc.at("iteration").get<int>();
  const json& weights = doc.at("weights");
  const json& bias = doc.at("bias");
  if (weights.size() != ActionCoefficients::kCount ||
      bias.size() != ActionCoefficients::kCount) {
    throw ValidationError("checkpoint weight shape mismatch");
  }
  for (int r = 0; r < ActionCoefficients::kCount; ++r) {
    const json& row = weights.at(r);
    if (row.size() != dim) throw ValidationError("checkpoint weight shape mismatch");
    for (std::size_t c = 0; c < dim; ++c) {
      ckpt.policy.weight(r, c) = row.at(c).get<double>();
    }
    ckpt.policy.bias(r) = bias.at(r).get<double>();
  }
  if (doc.contains("config")) ckpt.config_json = doc.at("config").dump();
  ckpt.policy.validate();
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write checkpoint: " + path);
  out << serialize_checkpoint(ckpt) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

void save_curve_csv(std::span<const TrainCurvePoint> curve,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write curve csv: " + path);
  out << "iteration,mean_reward,max_reward\n";
  out.precision(17);
  for (const TrainCurvePoint& p : curve) {
    out << p.iteration << ',' << p.mean_reward << ',' << p.max_reward << '\n';
  }
}

}  // namespace vrec
