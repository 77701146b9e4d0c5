#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vrec/adam.hpp"
#include "vrec/rng.hpp"
#include "vrec/types.hpp"

namespace vrec {

enum class RewardNorm { none, standardize, centered_rank };

const char* reward_norm_name(RewardNorm n);
RewardNorm reward_norm_from_name(const std::string& name);

// Evolution-strategies hyperparameters. Perturbations are Gaussian with
// standard deviation sigma; the population is evaluated per step and
// reduced to a gradient estimate that feeds an Adam ascent step.
struct EsConfig {
  double sigma = 0.5;
  double learning_rate = 0.0005;
  int population = 200;
  bool antithetic = true;
  RewardNorm normalization = RewardNorm::centered_rank;
  int iterations = 100;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const {
    if (!(sigma > 0.0)) throw ValidationError("es: sigma must be > 0");
    if (population < 2) throw ValidationError("es: population must be >= 2");
    if (antithetic && population % 2 != 0) {
      throw ValidationError("es: population must be even with antithetic sampling");
    }
    if (!(learning_rate > 0.0)) throw ValidationError("es: learning rate must be > 0");
    if (iterations < 0) throw ValidationError("es: iterations must be >= 0");
    if (workers < 1) throw ValidationError("es: workers must be >= 1");
  }
};

struct EsStepDiagnostics {
  double mean_reward = 0.0;
  double max_reward = 0.0;
  double gradient_norm = 0.0;
};

// A maximization objective over a flat parameter vector.
using Objective = std::function<double(std::span<const double>)>;

// Draws population perturbations, row-major (population x dim). With
// antithetic sampling rows come in mirrored pairs (+e, -e).
std::vector<double> draw_perturbations(Rng& rng, int population,
                                       std::size_t dim, double sigma,
                                       bool antithetic);

// Reward shaping before the gradient estimate. centered_rank maps rewards
// to [-0.5, 0.5] by rank, averaging ranks over ties so equal rewards get
// equal (and, for an all-equal population, zero) weight.
std::vector<double> normalize_rewards(std::span<const double> rewards,
                                      RewardNorm norm);

// Gradient estimate g = 1/(n*sigma) * sum_j shaped_j * eps_j.
std::vector<double> es_gradient(std::span<const double> perturbations,
                                std::span<const double> shaped_rewards,
                                std::size_t dim, double sigma);

// One ES update on theta in place. Population rewards are evaluated with
// `objective` (possibly on several worker threads) and reduced in
// perturbation-index order, so results do not depend on the worker count.
// Throws NumericError when any evaluation returns a non-finite reward.
EsStepDiagnostics es_step(std::vector<double>& theta, const Objective& objective,
                          const EsConfig& config, AdamState& adam, Rng& rng);

// Full loop: config.iterations steps from the given starting point.
// Returns per-step diagnostics.
std::vector<EsStepDiagnostics> es_optimize(std::vector<double>& theta,
                                           const Objective& objective,
                                           const EsConfig& config);

}  // namespace vrec
