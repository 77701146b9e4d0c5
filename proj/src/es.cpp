#include "vrec/es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace vrec {

const char* reward_norm_name(RewardNorm n) {
  switch (n) {
    case RewardNorm::none: return "none";
    case RewardNorm::standardize: return "standardize";
    case RewardNorm::centered_rank: return "centered_rank";
  }
  return "unknown";
}

RewardNorm reward_norm_from_name(const std::string& name) {
  if (name == "none") return RewardNorm::none;
  if (name == "standardize") return RewardNorm::standardize;
  if (name == "centered_rank") return RewardNorm::centered_rank;
  throw ValidationError("unknown reward normalization: " + name);
}

std::vector<double> draw_perturbations(Rng& rng, int population,
                                       std::size_t dim, double sigma,
                                       bool antithetic) {
  std::vector<double> eps(static_cast<std::size_t>(population) * dim);
  if (antithetic) {
    for (int pair = 0; pair < population / 2; ++pair) {
      double* plus = eps.data() + static_cast<std::size_t>(2 * pair) * dim;
      double* minus = plus + dim;
      for (std::size_t d = 0; d < dim; ++d) {
        const double z = sigma * rng.normal();
        plus[d] = z;
        minus[d] = -z;
      }
    }
  } else {
    for (double& e : eps) e = sigma * rng.normal();
  }
  return eps;
}

std::vector<double> normalize_rewards(std::span<const double> rewards,
                                      RewardNorm norm) {
  const std::size_t n = rewards.size();
  std::vector<double> shaped(rewards.begin(), rewards.end());
  switch (norm) {
    case RewardNorm::none:
      break;
    case RewardNorm::standardize: {
      const double mean = std::accumulate(shaped.begin(), shaped.end(), 0.0) /
                          static_cast<double>(n);
      double var = 0.0;
      for (double r : shaped) var += (r - mean) * (r - mean);
      const double sd = std::sqrt(var / static_cast<double>(n));
      for (double& r : shaped) r = sd > 0.0 ? (r - mean) / sd : 0.0;
      break;
    }
    case RewardNorm::centered_rank: {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rewards[a] < rewards[b];
      });
      // Average ranks across ties so equal rewards map to equal weight.
      std::size_t i = 0;
      while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && rewards[order[j + 1]] == rewards[order[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + j);
        for (std::size_t k = i; k <= j; ++k) shaped[order[k]] = mean_rank;
        i = j + 1;
      }
      if (n > 1) {
        for (double& r : shaped) r = r / static_cast<double>(n - 1) - 0.5;
      } else {
        shaped[0] = 0.0;
      }
      break;
    }
  }
  return shaped;
}

std::vector<double> es_gradient(std::span<const double> perturbations,
                                std::span<const double> shaped_rewards,
                                std::size_t dim, double sigma) {
  const std::size_t n = shaped_rewards.size();
  std::vector<double> grad(dim, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double* eps = perturbations.data() + j * dim;
    const double w = shaped_rewards[j];
    for (std::size_t d = 0; d < dim; ++d) grad[d] += w * eps[d];
  }
  const double scale = 1.0 / (static_cast<double>(n) * sigma);
  for (double& g : grad) g *= scale;
  return grad;
}

namespace {

// Evaluates all population members; results land at their perturbation
// index, so the later reduction is order-deterministic for any worker count.
std::vector<double> evaluate_population(const std::vector<double>& theta,
                                        std::span<const double> perturbations,
                                        const Objective& objective, int population,
                                        std::size_t dim, int workers) {
  std::vector<double> rewards(population);
  auto run_range = [&](int begin, int end) {
    std::vector<double> candidate(dim);
    for (int j = begin; j < end; ++j) {
      const double* eps = perturbations.data() + static_cast<std::size_t>(j) * dim;
      for (std::size_t d = 0; d < dim; ++d) candidate[d] = theta[d] + eps[d];
      rewards[j] = objective(candidate);
    }
  };
  if (workers <= 1 || population < 2 * workers) {
    run_range(0, population);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (population + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(population, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& t : pool) t.join();
  }
  return rewards;
}

}  // namespace

EsStepDiagnostics es_step(std::vector<double>& theta, const Objective& objective,
                          const EsConfig& config, AdamState& adam, Rng& rng) {
  config.validate();
  const std::size_t dim = theta.size();
  const int n = config.population;

  const std::vector<double> eps =
      draw_perturbations(rng, n, dim, config.sigma, config.antithetic);
  const std::vector<double> rewards =
      evaluate_population(theta, eps, objective, n, dim, config.workers);
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(rewards[j])) {
      throw NumericError("non-finite reward from perturbation " + std::to_string(j));
    }
  }

  const std::vector<double> shaped = normalize_rewards(rewards, config.normalization);
  const std::vector<double> grad = es_gradient(eps, shaped, dim, config.sigma);
  adam_ascend(theta, grad, adam, config.learning_rate);

  EsStepDiagnostics diag;
  diag.mean_reward = std::accumulate(rewards.begin(), rewards.end(), 0.0) /
                     static_cast<double>(n);
  diag.max_reward = *std::max_element(rewards.begin(), rewards.end());
  double g2 = 0.0;
  for (double g : grad) g2 += g * g;
  diag.gradient_norm = std::sqrt(g2);
  return diag;
}

std::vector<EsStepDiagnostics> es_optimize(std::vector<double>& theta,
                                           const Objective& objective,
                                           const EsConfig& config) {
  config.validate();
  AdamState adam(theta.size());
  Rng rng(config.seed);
  std::vector<EsStepDiagnostics> history;
  history.reserve(config.iterations);
  for (int t = 0; t < config.iterations; ++t) {
    history.push_back(es_step(theta, objective, config, adam, rng));
  }
  return history;
}

}  // namespace vrec
