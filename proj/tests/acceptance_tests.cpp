// Acceptance suite. Each test case covers one release criterion and prints
// one PASS/FAIL line with the measured numbers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vrec/generator.hpp"
#include "vrec/item_cf.hpp"
#include "vrec/log_io.hpp"
#include "vrec/metrics.hpp"
#include "vrec/pointwise.hpp"
#include "vrec/policy.hpp"
#include "vrec/replay.hpp"
#include "vrec/split.hpp"
#include "vrec/xvr.hpp"

using namespace vrec;
namespace fs = std::filesystem;

namespace {

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("ACCEPTANCE %-28s %s  %s\n", name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// Planted-optimum benchmark used by several criteria. Action rates are
// denser than the production ratios so desk-scale splits carry enough
// reward events for stable held-out comparisons; the production ratios get
// their own calibration criterion below.
GeneratorConfig planted_config(std::uint64_t seed, int pages) {
  GeneratorConfig config;
  config.num_pages = pages;
  config.num_items = 400;
  config.items_per_page = 10;
  config.clicks_per_page = 2.0;
  config.cart_given_click = 0.2;
  config.fav_given_click = 0.1;
  config.pay_given_click = 0.05;
  config.price_log_sigma = 0.5;
  config.seed = seed;
  return config;
}

struct PlantedEnv {
  Dataset data;
  XvrTable table;
  std::vector<PageLog> train_pages;
  std::vector<PageLog> eval_pages;
};

PlantedEnv make_planted_env(std::uint64_t seed, int pages) {
  PlantedEnv env;
  env.data = generate(planted_config(seed, pages));
  SplitConfig split_cfg;
  split_cfg.seed = seed;
  const SplitIndices split = split_pages(env.data.pages.size(), split_cfg);

  Dataset train_data;
  train_data.pages = select_pages(env.data, split.train);
  train_data.rebuild_universe();
  const std::vector<ActionType> actions{ActionType::Click, ActionType::Cart,
                                        ActionType::Wishlist};
  env.table = estimate_xvr(train_data, actions, 10.0);
  env.train_pages = std::move(train_data.pages);
  env.eval_pages = select_pages(env.data, split.eval);
  return env;
}

TrainOptions planted_train_options(std::uint64_t seed, ScoreMode mode,
                                   RewardMode reward) {
  TrainOptions options;
  options.es.sigma = 0.1;
  options.es.learning_rate = 0.02;
  options.es.population = 120;
  options.es.antithetic = true;
  options.es.normalization = RewardNorm::centered_rank;
  options.es.iterations = 300;
  options.es.seed = seed;
  options.es.workers = 2;
  options.pages_per_iteration = 512;
  options.t_max = 10;
  options.score_mode = mode;
  options.reward_mode = reward;
  return options;
}

// Best fixed (alpha_click, beta_click, gamma) on the selection context;
// the winner is then scored on held-out pages, the same protocol the
// trained policy follows.
ActionCoefficients grid_search_best(const ReplayContext& selection) {
  const double lattice[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  double best = -1e300;
  ActionCoefficients best_c;
  for (double a : lattice) {
    for (double b : lattice) {
      for (double g : lattice) {
        ActionCoefficients c;
        c.alpha_click = a;
        c.beta_click = b;
        c.gamma = g;
        const double r = selection.mean_reward_fixed(c);
        if (r > best) {
          best = r;
          best_c = c;
        }
      }
    }
  }
  return best_c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VREC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("es_sanity") {
  const auto start = std::chrono::steady_clock::now();
  Rng target_rng(2024);
  std::vector<double> target(10);
  for (double& v : target) v = target_rng.uniform(-1.0, 1.0);

  const Objective objective = [&target](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s -= (x[i] - target[i]) * (x[i] - target[i]);
    }
    return s;
  };

  EsConfig config;
  config.sigma = 0.1;
  config.learning_rate = 0.01;
  config.population = 100;
  config.antithetic = true;
  config.normalization = RewardNorm::none;
  config.seed = 7;

  std::vector<double> theta(10, 0.0);
  AdamState adam(theta.size());
  Rng rng(config.seed);
  double distance = 1e300;
  int used = 0;
  for (int t = 0; t < 5000; ++t) {
    es_step(theta, objective, config, adam, rng);
    double d2 = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      d2 += (theta[i] - target[i]) * (theta[i] - target[i]);
    }
    distance = std::sqrt(d2);
    used = t + 1;
    if (distance < 1e-2) break;
  }
  const double elapsed = seconds_since(start);
  const bool pass = distance < 1e-2 && elapsed < 60.0;
  report("es_sanity", pass,
         fmt("|theta-theta*|=%.2e after %d iterations in %.1fs (limits 1e-2, "
             "5000, 60s)",
             distance, used, elapsed));
  CHECK(distance < 1e-2);
  CHECK(elapsed < 60.0);
}

TEST_CASE("planted_optimum_recovery") {
  const auto start = std::chrono::steady_clock::now();
  const PlantedEnv env = make_planted_env(101, 10000);
  const RewardMode reward = RewardMode::click_pay();

  const TrainOptions options =
      planted_train_options(101, ScoreMode::click_only, reward);
  Dataset train_data;
  train_data.pages = env.train_pages;
  train_data.rebuild_universe();
  const TrainResult result = train_policy(train_data, env.table, options);

  // Grid and policy both fit on the training split and score on held-out.
  const ReplayContext train_context(train_data.pages, env.table, reward,
                                    WeightScheme::exp_decay,
                                    ScoreMode::click_only, 10);
  const ReplayContext eval_context(env.eval_pages, env.table, reward,
                                   WeightScheme::exp_decay, ScoreMode::click_only,
                                   10);
  const ActionCoefficients grid_coeffs = grid_search_best(train_context);
  const double grid_best = eval_context.mean_reward_fixed(grid_coeffs);
  const double policy_reward =
      eval_context.mean_reward_params(result.policy.params, result.policy.clamp);
  const double elapsed = seconds_since(start);

  const bool pass = policy_reward >= 0.95 * grid_best && elapsed < 600.0;
  report("planted_optimum_recovery", pass,
         fmt("policy R'=%.4f grid(%.0f,%.0f,%.0f) R'=%.4f ratio=%.3f (need "
             ">=0.95) in %.0fs",
             policy_reward, grid_coeffs.alpha_click, grid_coeffs.beta_click,
             grid_coeffs.gamma, grid_best, policy_reward / grid_best, elapsed));
  CHECK(policy_reward >= 0.95 * grid_best);
  CHECK(elapsed < 600.0);
}

TEST_CASE("directional_ordering") {
  const RewardMode reward = RewardMode::click_pay();
  const int k = 20;
  // Ordering is required on the metrics averaged over the three seeds; the
  // two LTR baselines are near-tied on the offline reward (the reference
  // results separate them by well under a tenth of a percent), so per-seed
  // strict ordering between them is below the benchmark's noise floor.
  double cf_r = 0.0, lr_r = 0.0, mlp_r = 0.0, rl_r = 0.0;
  double cf_g = 0.0, lr_g = 0.0, mlp_g = 0.0, rl_g = 0.0;
  std::string detail;

  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    const PlantedEnv env = make_planted_env(seed, 4000);
    Dataset train_data;
    train_data.pages = env.train_pages;
    train_data.rebuild_universe();

    const ItemCfModel cf = ItemCfModel::train(train_data, {});
    PointwiseConfig lr_cfg = PointwiseConfig::logistic_defaults();
    lr_cfg.epochs = 12;
    lr_cfg.seed = seed;
    const PointwiseRanker lr = PointwiseRanker::train(train_data, lr_cfg);
    PointwiseConfig mlp_cfg = PointwiseConfig::mlp_defaults();
    mlp_cfg.epochs = 200;
    mlp_cfg.seed = seed;
    const PointwiseRanker mlp = PointwiseRanker::train(train_data, mlp_cfg);

    const TrainOptions options =
        planted_train_options(seed, ScoreMode::click_only, reward);
    const TrainResult rl = train_policy(train_data, env.table, options);

    auto eval = [&](const RankStrategy& strategy) {
      return evaluate_all(strategy, env.eval_pages, env.table, reward,
                          WeightScheme::exp_decay, k,
                          RelevanceRule::clicked_or_purchased);
    };
    const EvalReport r_cf =
        eval([&cf](const PageLog& p, std::size_t) { return cf.rank(p); });
    const EvalReport r_lr =
        eval([&lr](const PageLog& p, std::size_t) { return lr.rank(p); });
    const EvalReport r_mlp =
        eval([&mlp](const PageLog& p, std::size_t) { return mlp.rank(p); });
    const EvalReport r_rl =
        eval(policy_strategy(rl.policy, env.table, ScoreMode::click_only, 10));

    cf_r += r_cf.mean_offline_reward;
    lr_r += r_lr.mean_offline_reward;
    mlp_r += r_mlp.mean_offline_reward;
    rl_r += r_rl.mean_offline_reward;
    cf_g += r_cf.expected_gmv;
    lr_g += r_lr.expected_gmv;
    mlp_g += r_mlp.expected_gmv;
    rl_g += r_rl.expected_gmv;
    detail += fmt("[seed %llu R': cf=%.3f lr=%.3f mlp=%.3f rl=%.3f] ",
                  static_cast<unsigned long long>(seed),
                  r_cf.mean_offline_reward, r_lr.mean_offline_reward,
                  r_mlp.mean_offline_reward, r_rl.mean_offline_reward);
  }
  const bool reward_order = rl_r >= mlp_r && mlp_r >= lr_r && lr_r >= cf_r;
  const bool gmv_order = rl_g >= mlp_g && mlp_g >= lr_g && lr_g >= cf_g;
  const double gap = (rl_r - cf_r) / cf_r;
  const bool pass = reward_order && gmv_order && gap >= 0.10;
  report("directional_ordering", pass,
         detail + fmt("mean R' order %s, mean E[GMV] order %s, rl-vs-cf "
                      "gap=%.1f%% (need >=10%%)",
                      reward_order ? "ok" : "BAD", gmv_order ? "ok" : "BAD",
                      gap * 100.0));
  CHECK(reward_order);
  CHECK(gmv_order);
  CHECK(gap >= 0.10);
}

TEST_CASE("ablation_direction") {
  // k is half the page so the E[GMV] column reflects which logged value a
  // strategy pulls into its top positions; at k >= T every strategy would
  // select all slots and the column could not move.
  const int k = 5;
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
    GeneratorConfig config = planted_config(seed, 4000);
    config.cart_pay_boost = 12.0;   // cart flags carry purchase signal
    config.affinity_spread = 0.9;
    const Dataset data = generate(config);
    SplitConfig split_cfg;
    split_cfg.seed = seed;
    const SplitIndices split = split_pages(data.pages.size(), split_cfg);
    Dataset train_data;
    train_data.pages = select_pages(data, split.train);
    train_data.rebuild_universe();
    const std::vector<PageLog> eval_pages = select_pages(data, split.eval);
    const std::vector<ActionType> actions{ActionType::Click, ActionType::Cart,
                                          ActionType::Wishlist};
    const XvrTable table = estimate_xvr(train_data, actions, 10.0);

    RewardMode click_pay = RewardMode::click_pay();
    RewardMode full_mode = RewardMode::all_actions();

    const TrainOptions base_opt =
        planted_train_options(seed, ScoreMode::full, click_pay);
    const TrainOptions full_opt =
        planted_train_options(seed, ScoreMode::full, full_mode);
    const TrainResult base = train_policy(train_data, table, base_opt);
    const TrainResult full = train_policy(train_data, table, full_opt);

    auto gmv = [&](const LinearPolicy& policy) {
      return evaluate_all(policy_strategy(policy, table, ScoreMode::full, 10),
                          eval_pages, table, RewardMode::click_pay(),
                          WeightScheme::exp_decay, k,
                          RelevanceRule::clicked_or_purchased)
          .expected_gmv;
    };
    const double g_base = gmv(base.policy);
    const double g_full = gmv(full.policy);
    if (g_full >= g_base) ++wins;
    detail += fmt("[seed %llu E[GMV]: click=%.4f +cart/fav=%.4f %s] ",
                  static_cast<unsigned long long>(seed), g_base, g_full,
                  g_full >= g_base ? "ok" : "miss");
  }
  const bool pass = wins >= 2;
  report("ablation_direction", pass, detail + fmt("wins=%d/3 (need >=2)", wins));
  CHECK(wins >= 2);
}

TEST_CASE("metric_oracle_equivalence") {
  Rng rng(3001);
  long mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = 1 + rng.uniform_int(12);
    std::vector<int> pi(t);
    for (int i = 0; i < t; ++i) pi[i] = i;
    for (int i = t; i > 1; --i) std::swap(pi[i - 1], pi[rng.uniform_int(i)]);
    std::set<int> relevant;
    for (int i = 0; i < t; ++i) {
      if (rng.bernoulli(0.3)) relevant.insert(i);
    }
    const int k = 1 + rng.uniform_int(10);

    const PrMap got = precision_recall_map(pi, relevant, k);

    // brute force: scan positions, recount hits independently
    double bp = 0.0, br = 0.0, bap = 0.0;
    if (!relevant.empty()) {
      std::vector<int> slot_at(t);
      for (int slot = 0; slot < t; ++slot) slot_at[pi[slot]] = slot;
      int hits = 0;
      for (int pos = 0; pos < std::min(k, t); ++pos) {
        if (relevant.count(slot_at[pos])) {
          ++hits;
          bap += static_cast<double>(hits) / (pos + 1);
        }
      }
      bp = static_cast<double>(hits) / k;
      br = static_cast<double>(hits) / static_cast<double>(relevant.size());
      bap /= std::min<int>(static_cast<int>(relevant.size()), k);
    }
    if (got.precision != bp || got.recall != br || got.average_precision != bap) {
      ++mismatches;
    }
  }
  const bool pass = mismatches == 0;
  report("metric_oracle_equivalence", pass,
         fmt("%ld/1000 mismatches (need 0, exact equality)", mismatches));
  CHECK(mismatches == 0);
}

TEST_CASE("offline_reward_optimality") {
  Rng rng(3002);
  XvrTable table;
  table.set_global(ActionType::Click, 0.08);
  const RewardMode mode = RewardMode::click_pay();
  long violations = 0;
  long pages_checked = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int t = 1 + rng.uniform_int(5);
    PageLog page;
    page.context = {rng.uniform_int(7), rng.uniform_int(3), rng.uniform_int(3),
                    rng.uniform_int(10), rng.uniform_int(24)};
    for (int i = 0; i < t; ++i) {
      Slot s;
      s.item = {"i" + std::to_string(i), rng.uniform(), rng.uniform(),
                0.5 + 30.0 * rng.uniform(), {}, {}};
      s.flags.clicked = rng.bernoulli(0.5);
      s.flags.purchased = s.flags.clicked && rng.bernoulli(0.3);
      page.slots.push_back(std::move(s));
    }
    std::vector<double> rewards(t);
    for (int i = 0; i < t; ++i) {
      rewards[i] = item_reward(page.slots[i].flags, page.slots[i].item, table, mode);
    }
    const double best = offline_page_reward(page, permutation_from_scores(rewards),
                                            table, mode, WeightScheme::exp_decay);
    std::vector<int> pi(t);
    std::iota(pi.begin(), pi.end(), 0);
    do {
      if (offline_page_reward(page, pi, table, mode, WeightScheme::exp_decay) >
          best + 1e-12) {
        ++violations;
      }
    } while (std::next_permutation(pi.begin(), pi.end()));
    ++pages_checked;
  }
  const bool pass = violations == 0;
  report("offline_reward_optimality", pass,
         fmt("%ld violations over %ld exhaustive pages (need 0)", violations,
             pages_checked));
  CHECK(violations == 0);
}

TEST_CASE("xvr_estimator") {
  // 20-slot fixture, hand-counted:
  //   item A: 6 clicks, 1 converting -> 1/6
  //   item B: 4 clicks, 1 converting -> 1/4
  //   item C: 8 clicks, 0 converting -> 0
  //   2 unclicked slots; global = 2/18 = 1/9
  Dataset data;
  PageLog page;
  page.context = {1, 0, 1, 0, 9};
  auto add = [&page](const std::string& id, bool clicked, bool purchased) {
    Slot s;
    s.item = {id, 0.1, 0.05, 10.0, {}, {}};
    s.flags.clicked = clicked;
    s.flags.purchased = purchased;
    page.slots.push_back(std::move(s));
  };
  add("A", true, true);
  for (int i = 0; i < 5; ++i) add("A", true, false);
  add("B", true, true);
  for (int i = 0; i < 3; ++i) add("B", true, false);
  for (int i = 0; i < 8; ++i) add("C", true, false);
  add("D", false, false);
  add("E", false, false);
  REQUIRE(page.slots.size() == 20);
  data.pages.push_back(page);
  data.rebuild_universe();

  XvrTable raw;
  raw.estimate(data, ActionType::Click, 0.0);
  const bool ratios_ok = raw.lookup("A", ActionType::Click) == 1.0 / 6.0 &&
                         raw.lookup("B", ActionType::Click) == 1.0 / 4.0 &&
                         raw.lookup("C", ActionType::Click) == 0.0 &&
                         raw.slice(ActionType::Click).global == 2.0 / 18.0;

  XvrTable smooth;
  smooth.estimate(data, ActionType::Click, 1e6);
  const double g = smooth.slice(ActionType::Click).global;
  double max_gap = 0.0;
  for (const std::string id : {"A", "B", "C"}) {
    max_gap = std::max(max_gap, std::abs(smooth.lookup(id, ActionType::Click) - g));
  }
  const bool pass = ratios_ok && max_gap < 1e-6;
  report("xvr_estimator", pass,
         fmt("raw ratios %s; max |xvr-g| at pc=1e6: %.2e (need <1e-6)",
             ratios_ok ? "exact" : "WRONG", max_gap));
  CHECK(ratios_ok);
  CHECK(max_gap < 1e-6);
}

TEST_CASE("mlp_gradient_check") {
  Rng rng(3003);
  std::vector<double> params(pointwise_param_count(RankerVariant::mlp));
  for (double& p : params) p = rng.uniform(-0.5, 0.5);
  FeatureRow x;
  for (double& v : x) v = rng.uniform(0.0, 1.0);
  const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
  const double w = 1.0 + 2.0 * rng.uniform();

  std::vector<double> grad(params.size(), 0.0);
  pointwise_example_grad(RankerVariant::mlp, params, x, y, w, grad);

  const double h = 1e-5;
  double worst = 0.0;
  for (int probe = 0; probe < 20; ++probe) {
    const std::size_t i = rng.uniform_int(static_cast<int>(params.size()));
    std::vector<double> plus = params, minus = params;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (pointwise_example_loss(RankerVariant::mlp, plus, x, y, w) -
                       pointwise_example_loss(RankerVariant::mlp, minus, x, y, w)) /
                      (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-10});
    worst = std::max(worst, std::abs(fd - grad[i]) / denom);
  }
  const bool pass = worst < 1e-4;
  report("mlp_gradient_check", pass,
         fmt("max relative error %.2e over 20 coordinates (need <1e-4)", worst));
  CHECK(worst < 1e-4);
}

TEST_CASE("cli_determinism") {
  const fs::path dir = fs::temp_directory_path() / "vrec_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();

  auto rerun_identical = [&](const std::string& args,
                             const std::vector<std::string>& outputs,
                             const std::string& variation = "") {
    std::vector<std::string> first;
    REQUIRE(run_cli(args) == 0);
    for (const std::string& f : outputs) first.push_back(slurp(dir / f));
    for (const std::string& f : outputs) fs::remove(dir / f);
    REQUIRE(run_cli(variation.empty() ? args : variation) == 0);
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      if (slurp(dir / outputs[i]) != first[i]) return false;
    }
    return true;
  };

  bool ok = true;
  ok &= rerun_identical(
      "gen-data --data " + d + "/data.jsonl --manifest " + d +
          "/manifest.json --pages 400 --t 8 --seed 5",
      {"data.jsonl", "manifest.json"});
  ok &= rerun_identical("estimate-xvr --data " + d + "/data.jsonl --xvr-dir " + d,
                        {"xvr_click.json", "xvr_cart.json", "xvr_wishlist.json"});

  // train twice with different worker counts; checkpoint and curve must match
  const std::string train_args =
      "train --data " + d + "/data.jsonl --xvr-dir " + d + " --checkpoint " + d +
      "/ckpt.json --curve " + d + "/curve.csv --iterations 8 --seed 9";
  ok &= rerun_identical(train_args + " --workers 1", {"ckpt.json", "curve.csv"},
                        train_args + " --workers 2");

  ok &= rerun_identical("baseline-train --data " + d +
                            "/data.jsonl --variant logistic --models-dir " + d,
                        {"logistic.json"});
  ok &= rerun_identical("baseline-train --data " + d +
                            "/data.jsonl --variant mlp --models-dir " + d,
                        {"mlp.json"});
  ok &= rerun_identical("baseline-train --data " + d +
                            "/data.jsonl --variant cf --models-dir " + d,
                        {"item_cf.json"});
  ok &= rerun_identical("compare --data " + d + "/data.jsonl --xvr-dir " + d +
                            " --checkpoint " + d + "/ckpt.json --models-dir " + d +
                            " --out " + d + "/compare.json --with-oracle",
                        {"compare.json"});
  ok &= rerun_identical("eval --data " + d + "/data.jsonl --xvr-dir " + d +
                            " --strategy oracle --report " + d +
                            "/report.json --per-page " + d + "/per_page.csv",
                        {"report.json", "per_page.csv"});

  // exit codes: usage -> 1, missing data -> 2
  const bool usage_code = run_cli("definitely-not-a-command") == 1;
  const bool data_code =
      run_cli("estimate-xvr --data " + d + "/absent.jsonl --xvr-dir " + d) == 2;

  const bool pass = ok && usage_code && data_code;
  report("cli_determinism", pass,
         fmt("byte-identical reruns %s; exit codes usage=%s data=%s",
             ok ? "ok" : "MISMATCH", usage_code ? "1" : "wrong",
             data_code ? "2" : "wrong"));
  CHECK(ok);
  CHECK(usage_code);
  CHECK(data_code);
}

TEST_CASE("table1_ratio_calibration") {
  GeneratorConfig config;
  config.num_pages = 100000;  // 1e6 slots
  config.num_items = 1000;
  config.items_per_page = 10;
  config.seed = 424242;
  const Dataset data = generate(config);
  const ActionCounts counts = count_actions(data);
  REQUIRE(counts.slots >= 100000);

  const double clicks = static_cast<double>(counts.clicks);
  const double cart_ratio = counts.carts / clicks;
  const double fav_ratio = counts.wishlists / clicks;
  const double pay_ratio = counts.purchases / clicks;
  auto rel_err = [](double got, double want) {
    return std::abs(got - want) / want;
  };
  const double e_cart = rel_err(cart_ratio, 60.0 / 670.0);
  const double e_fav = rel_err(fav_ratio, 30.0 / 670.0);
  const double e_pay = rel_err(pay_ratio, 3.0 / 670.0);
  const double e_click =
      rel_err(clicks / static_cast<double>(counts.pages), 670.0 / 500.0);

  const bool pass = e_cart < 0.10 && e_fav < 0.10 && e_pay < 0.10 && e_click < 0.10;
  report("table1_ratio_calibration", pass,
         fmt("clicks/page err=%.1f%% carts err=%.1f%% wishlists err=%.1f%% "
             "purchases err=%.1f%% at %ld slots (need <10%%)",
             e_click * 100, e_cart * 100, e_fav * 100, e_pay * 100, counts.slots));
  CHECK(e_click < 0.10);
  CHECK(e_cart < 0.10);
  CHECK(e_fav < 0.10);
  CHECK(e_pay < 0.10);
}
