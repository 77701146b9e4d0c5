// vrec: value-aware recommendation toolkit.
//
// Subcommands: gen-data, estimate-xvr, train, eval, baseline-train, compare.
// One JSON config file drives every command; flags override config keys.
// Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 numeric
// failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vrec/generator.hpp"
#include "vrec/item_cf.hpp"
#include "vrec/log_io.hpp"
#include "vrec/metrics.hpp"
#include "vrec/pointwise.hpp"
#include "vrec/policy.hpp"
#include "vrec/replay.hpp"
#include "vrec/run_config.hpp"
#include "vrec/split.hpp"
#include "vrec/xvr.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vrec;

namespace {

void require_input(const std::string& path, const char* what) {
  if (path.empty()) {
    throw ValidationError(std::string("missing required path: ") + what);
  }
  if (!fs::exists(path)) {
    throw ValidationError(std::string(what) + " not found: " + path);
  }
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write: " + path);
  out << text;
}

std::vector<ActionType> parse_actions(const std::vector<std::string>& names) {
  std::vector<ActionType> out;
  for (const std::string& n : names) out.push_back(action_from_name(n));
  return out;
}

json training_config_json(const RunConfig& cfg) {
  json doc;
  doc["sigma"] = cfg.es.sigma;
  doc["learning_rate"] = cfg.es.learning_rate;
  doc["population"] = cfg.es.population;
  doc["antithetic"] = cfg.es.antithetic;
  doc["normalization"] = reward_norm_name(cfg.es.normalization);
  doc["iterations"] = cfg.es.iterations;
  doc["seed"] = cfg.es.seed;
  doc["pages_per_iteration"] = cfg.pages_per_iteration;
  doc["score_mode"] = score_mode_name(cfg.score_mode);
  doc["reward_mode"] = cfg.reward_mode.names();
  doc["weight_scheme"] = weight_scheme_name(cfg.weight_scheme);
  return doc;
}

int cmd_gen_data(const RunConfig& cfg) {
  if (cfg.paths.data.empty()) {
    throw ValidationError("missing required path: paths.data");
  }
  const Dataset data = generate(cfg.generator);
  ensure_parent_dir(cfg.paths.data);
  save_logs(data, cfg.paths.data);
  const ActionCounts counts = count_actions(data);
  const std::string manifest = manifest_json(cfg.generator, counts);
  if (!cfg.paths.manifest.empty()) write_text(cfg.paths.manifest, manifest);
  std::printf("wrote %ld pages (%ld slots) to %s\n", counts.pages, counts.slots,
              cfg.paths.data.c_str());
  std::printf("clicks=%ld carts=%ld wishlists=%ld purchases=%ld\n", counts.clicks,
              counts.carts, counts.wishlists, counts.purchases);
  return 0;
}

int cmd_estimate_xvr(const RunConfig& cfg) {
  require_input(cfg.paths.data, "paths.data");
  if (cfg.paths.xvr_dir.empty()) {
    throw ValidationError("missing required path: paths.xvr_dir");
  }
  const Dataset data = load_logs(cfg.paths.data);
  const std::vector<ActionType> actions = parse_actions(cfg.xvr_actions);
  const XvrTable table = estimate_xvr(data, actions, cfg.xvr_pseudo_count);
  fs::create_directories(cfg.paths.xvr_dir);
  save_xvr_dir(table, cfg.paths.xvr_dir, actions);
  for (ActionType a : actions) {
    if (a == ActionType::Purchase) continue;
    std::printf("estimated xvr for '%s': global=%.6f items=%zu\n", action_name(a),
                table.slice(a).global, table.slice(a).items.size());
  }
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  require_input(cfg.paths.data, "paths.data");
  require_input(cfg.paths.xvr_dir, "paths.xvr_dir");
  if (cfg.paths.checkpoint.empty()) {
    throw ValidationError("missing required path: paths.checkpoint");
  }
  const Dataset data = load_logs(cfg.paths.data);
  const XvrTable table = load_xvr_dir(cfg.paths.xvr_dir);
  const SplitIndices split = split_pages(data.pages.size(), cfg.split);

  Dataset train_data;
  train_data.pages = select_pages(data, split.train);
  train_data.rebuild_universe();

  TrainOptions options;
  options.es = cfg.es;
  options.pages_per_iteration = cfg.pages_per_iteration;
  options.t_max = cfg.t_max;
  options.score_mode = cfg.score_mode;
  options.reward_mode = cfg.reward_mode;
  options.scheme = cfg.weight_scheme;
  options.clamp = cfg.coefficient_clamp;

  const TrainResult result = train_policy(train_data, table, options);

  Checkpoint ckpt;
  ckpt.policy = result.policy;
  ckpt.t_max = cfg.t_max;
  ckpt.iteration = cfg.es.iterations;
  ckpt.config_json = training_config_json(cfg).dump();
  ensure_parent_dir(cfg.paths.checkpoint);
  save_checkpoint(ckpt, cfg.paths.checkpoint);
  if (!cfg.paths.curve.empty()) {
    ensure_parent_dir(cfg.paths.curve);
    save_curve_csv(result.curve, cfg.paths.curve);
  }

  const std::vector<PageLog> eval_pages = select_pages(data, split.eval);
  const double eval_reward =
      evaluate_policy(result.policy, eval_pages, table, cfg.reward_mode,
                      cfg.weight_scheme, cfg.score_mode, cfg.t_max);
  std::printf("trained %d iterations on %zu pages; eval mean R'_page=%.6f\n",
              cfg.es.iterations, split.train.size(), eval_reward);
  return 0;
}

ActionCoefficients parse_coeffs(const std::string& text, double clamp) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  ActionCoefficients c;
  if (vals.size() == 3) {
    c.alpha_click = vals[0];
    c.beta_click = vals[1];
    c.gamma = vals[2];
  } else if (vals.size() == 7) {
    for (int i = 0; i < ActionCoefficients::kCount; ++i) c[i] = vals[i];
  } else {
    throw ValidationError("--coeffs expects 3 (alpha_click,beta_click,gamma) or 7 values");
  }
  c.validate(clamp);
  return c;
}

std::vector<PageLog> split_part(const Dataset& data, const RunConfig& cfg,
                                const std::string& part) {
  if (part == "all") return data.pages;
  const SplitIndices split = split_pages(data.pages.size(), cfg.split);
  if (part == "train") return select_pages(data, split.train);
  if (part == "eval") return select_pages(data, split.eval);
  throw ValidationError("unknown split part: " + part);
}

int cmd_eval(const RunConfig& cfg, const std::string& strategy_name,
             const std::string& coeffs_text, const std::string& part) {
  require_input(cfg.paths.data, "paths.data");
  require_input(cfg.paths.xvr_dir, "paths.xvr_dir");
  const Dataset data = load_logs(cfg.paths.data);
  const XvrTable table = load_xvr_dir(cfg.paths.xvr_dir);
  const std::vector<PageLog> pages = split_part(data, cfg, part);

  RankStrategy strategy;
  std::optional<Checkpoint> ckpt;
  ActionCoefficients fixed;
  if (strategy_name == "policy") {
    require_input(cfg.paths.checkpoint, "paths.checkpoint");
    ckpt = load_checkpoint(cfg.paths.checkpoint);
    strategy = policy_strategy(ckpt->policy, table, cfg.score_mode, ckpt->t_max);
  } else if (strategy_name == "logged") {
    strategy = logged_order_strategy();
  } else if (strategy_name == "random") {
    strategy = seeded_random_strategy(cfg.seed);
  } else if (strategy_name == "oracle") {
    strategy = oracle_strategy(table, cfg.reward_mode);
  } else if (strategy_name == "fixed") {
    fixed = parse_coeffs(coeffs_text, cfg.coefficient_clamp);
    strategy = fixed_coefficients_strategy(fixed, table, cfg.score_mode);
  } else {
    throw ValidationError("unknown strategy: " + strategy_name);
  }

  const EvalReport report = evaluate_all(strategy, pages, table, cfg.reward_mode,
                                         cfg.weight_scheme, cfg.eval_k,
                                         cfg.relevance);
  const ReplayReport replay =
      replay_evaluate(strategy, pages, table, cfg.reward_mode, cfg.weight_scheme);

  json doc = json::parse(report.to_json());
  doc["strategy"] = strategy_name;
  doc["split"] = part;
  doc["total_gmv_logged"] = replay.total_gmv;
  const std::string text = doc.dump(2);
  if (!cfg.paths.report.empty()) write_text(cfg.paths.report, text + "\n");
  if (!cfg.paths.per_page.empty()) {
    ensure_parent_dir(cfg.paths.per_page);
    replay.write_csv(cfg.paths.per_page);
  }
  std::printf("%s\n", text.c_str());
  return 0;
}

int cmd_baseline_train(const RunConfig& cfg, const std::string& variant) {
  require_input(cfg.paths.data, "paths.data");
  if (cfg.paths.models_dir.empty()) {
    throw ValidationError("missing required path: paths.models_dir");
  }
  const Dataset data = load_logs(cfg.paths.data);
  const SplitIndices split = split_pages(data.pages.size(), cfg.split);
  Dataset train_data;
  train_data.pages = select_pages(data, split.train);
  train_data.rebuild_universe();

  fs::create_directories(cfg.paths.models_dir);
  if (variant == "cf") {
    const ItemCfModel model = ItemCfModel::train(train_data, cfg.item_cf);
    model.save(cfg.paths.models_dir + "/item_cf.json");
    std::printf("trained item-cf on %zu pages\n", split.train.size());
  } else if (variant == "logistic" || variant == "mlp") {
    const PointwiseConfig& pc = variant == "logistic" ? cfg.logistic : cfg.mlp;
    const PointwiseRanker model = PointwiseRanker::train(train_data, pc);
    model.save(cfg.paths.models_dir + "/" + variant + ".json");
    std::printf("trained %s on %zu pages; final loss=%.6f\n", variant.c_str(),
                split.train.size(),
                model.epoch_loss().empty() ? 0.0 : model.epoch_loss().back());
  } else {
    throw ValidationError("unknown baseline variant: " + variant);
  }
  return 0;
}

struct CompareRow {
  std::string name;
  EvalReport report;
};

std::string bracket(double value, double base0, double base1, bool has_base1) {
  char buf[64];
  if (base0 == 0.0) return "";
  const double imp0 = (value - base0) / base0 * 100.0;
  if (!has_base1 || base1 == 0.0) {
    std::snprintf(buf, sizeof(buf), " (%.1f%%/-)", imp0);
  } else {
    const double imp1 = (value - base1) / base1 * 100.0;
    std::snprintf(buf, sizeof(buf), " (%.1f%%/%.1f%%)", imp0, imp1);
  }
  return buf;
}

int cmd_compare(const RunConfig& cfg, bool with_oracle) {
  require_input(cfg.paths.data, "paths.data");
  require_input(cfg.paths.xvr_dir, "paths.xvr_dir");
  require_input(cfg.paths.checkpoint, "paths.checkpoint");
  require_input(cfg.paths.models_dir, "paths.models_dir");

  const Dataset data = load_logs(cfg.paths.data);
  const XvrTable table = load_xvr_dir(cfg.paths.xvr_dir);
  const SplitIndices split = split_pages(data.pages.size(), cfg.split);
  const std::vector<PageLog> pages = select_pages(data, split.eval);

  const ItemCfModel cf = ItemCfModel::load(cfg.paths.models_dir + "/item_cf.json");
  const PointwiseRanker lr =
      PointwiseRanker::load(cfg.paths.models_dir + "/logistic.json");
  const PointwiseRanker mlp = PointwiseRanker::load(cfg.paths.models_dir + "/mlp.json");
  const Checkpoint ckpt = load_checkpoint(cfg.paths.checkpoint);

  auto model_strategy = [](const auto& model) {
    return [&model](const PageLog& page, std::size_t) { return model.rank(page); };
  };

  std::vector<std::pair<std::string, RankStrategy>> strategies;
  strategies.emplace_back("item_cf", model_strategy(cf));
  strategies.emplace_back("lr_ltr", model_strategy(lr));
  strategies.emplace_back("mlp_ltr", model_strategy(mlp));
  strategies.emplace_back(
      "value_rl", policy_strategy(ckpt.policy, table, cfg.score_mode, ckpt.t_max));
  if (with_oracle) {
    strategies.emplace_back("oracle", oracle_strategy(table, cfg.reward_mode));
  }

  std::vector<CompareRow> rows;
  for (const auto& [name, strategy] : strategies) {
    CompareRow row;
    row.name = name;
    row.report = evaluate_all(strategy, pages, table, cfg.reward_mode,
                              cfg.weight_scheme, cfg.eval_k, cfg.relevance);
    rows.push_back(std::move(row));
  }

  json doc;
  doc["k"] = cfg.eval_k;
  doc["pages"] = pages.size();
  json jrows = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json r = json::parse(rows[i].report.to_json());
    r["name"] = rows[i].name;
    if (i > 0) {
      auto improvements = [&](const EvalReport& base) {
        auto rel = [](double v, double b) {
          return b != 0.0 ? (v - b) / b * 100.0 : 0.0;
        };
        return json{
            {"expected_gmv", rel(rows[i].report.expected_gmv, base.expected_gmv)},
            {"mean_offline_reward", rel(rows[i].report.mean_offline_reward,
                                        base.mean_offline_reward)},
            {"precision_at_k",
             rel(rows[i].report.precision_at_k, base.precision_at_k)},
            {"recall_at_k", rel(rows[i].report.recall_at_k, base.recall_at_k)},
            {"map_at_k", rel(rows[i].report.map_at_k, base.map_at_k)}};
      };
      r["improvement_vs_first"] = improvements(rows[0].report);
      if (i > 1) r["improvement_vs_second"] = improvements(rows[1].report);
    }
    jrows.push_back(std::move(r));
  }
  doc["rows"] = std::move(jrows);
  const std::string out_json = doc.dump(2);
  if (!cfg.paths.compare.empty()) write_text(cfg.paths.compare, out_json + "\n");

  std::printf("%-10s %-22s %-22s %-18s %-18s %-18s\n", "strategy", "E[GMV]",
              "mean R'_page", "P@k(%)", "R@k(%)", "MAP@k(%)");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EvalReport& r = rows[i].report;
    const EvalReport& b0 = rows[0].report;
    const EvalReport& b1 = rows.size() > 1 ? rows[1].report : rows[0].report;
    const bool has1 = i > 1;
    char gmv[64], rw[64], p[64], rc[64], m[64];
    std::snprintf(gmv, sizeof(gmv), "%.4f%s", r.expected_gmv,
                  i == 0 ? "" : bracket(r.expected_gmv, b0.expected_gmv,
                                        b1.expected_gmv, has1).c_str());
    std::snprintf(rw, sizeof(rw), "%.4f%s", r.mean_offline_reward,
                  i == 0 ? "" : bracket(r.mean_offline_reward,
                                        b0.mean_offline_reward,
                                        b1.mean_offline_reward, has1).c_str());
    std::snprintf(p, sizeof(p), "%.2f%s", r.precision_at_k * 100.0,
                  i == 0 ? "" : bracket(r.precision_at_k, b0.precision_at_k,
                                        b1.precision_at_k, has1).c_str());
    std::snprintf(rc, sizeof(rc), "%.2f%s", r.recall_at_k * 100.0,
                  i == 0 ? "" : bracket(r.recall_at_k, b0.recall_at_k,
                                        b1.recall_at_k, has1).c_str());
    std::snprintf(m, sizeof(m), "%.2f%s", r.map_at_k * 100.0,
                  i == 0 ? "" : bracket(r.map_at_k, b0.map_at_k, b1.map_at_k,
                                        has1).c_str());
    std::printf("%-10s %-22s %-22s %-18s %-18s %-18s\n", rows[i].name.c_str(), gmv,
                rw, p, rc, m);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"value-aware recommendation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");

  // Per-command overrides. Only flags the user actually passes override the
  // config file values.
  std::string data_path, xvr_dir, checkpoint, curve, report, per_page, models_dir,
      compare_out, manifest;
  std::uint64_t seed = 0;
  int pages = 0, iterations = 0, workers = 0, k = 0, t_max = 0;
  double pseudo_count = 0.0;
  std::string strategy = "policy", coeffs_text, part = "eval", variant = "cf";
  bool with_oracle = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", data_path, "page log JSONL path");
    cmd->add_option("--seed", seed, "master seed");
  };

  CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic page log");
  add_common(gen);
  gen->add_option("--pages", pages, "number of pages");
  gen->add_option("--t", t_max, "items per page");
  gen->add_option("--manifest", manifest, "manifest output path");

  CLI::App* xvr = app.add_subcommand("estimate-xvr", "estimate conversion rates");
  add_common(xvr);
  xvr->add_option("--xvr-dir", xvr_dir, "output directory for xvr files");
  xvr->add_option("--pseudo-count", pseudo_count, "smoothing pseudo-count");

  CLI::App* train = app.add_subcommand("train", "train the ranking policy");
  add_common(train);
  train->add_option("--xvr-dir", xvr_dir, "xvr directory");
  train->add_option("--checkpoint", checkpoint, "checkpoint output path");
  train->add_option("--curve", curve, "training curve CSV output path");
  train->add_option("--iterations", iterations, "training iterations");
  train->add_option("--workers", workers, "population evaluation threads");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a ranking strategy");
  add_common(eval);
  eval->add_option("--xvr-dir", xvr_dir, "xvr directory");
  eval->add_option("--checkpoint", checkpoint, "policy checkpoint path");
  eval->add_option("--strategy", strategy,
                   "policy|logged|random|oracle|fixed");
  eval->add_option("--coeffs", coeffs_text, "fixed coefficients, comma separated");
  eval->add_option("--split-part", part, "train|eval|all");
  eval->add_option("--report", report, "report JSON output path");
  eval->add_option("--per-page", per_page, "per-page reward CSV output path");
  eval->add_option("--k", k, "metric cutoff");

  CLI::App* base = app.add_subcommand("baseline-train", "train a baseline model");
  add_common(base);
  base->add_option("--variant", variant, "cf|logistic|mlp");
  base->add_option("--models-dir", models_dir, "model output directory");

  CLI::App* cmp = app.add_subcommand("compare", "compare strategies on held-out pages");
  add_common(cmp);
  cmp->add_option("--xvr-dir", xvr_dir, "xvr directory");
  cmp->add_option("--checkpoint", checkpoint, "policy checkpoint path");
  cmp->add_option("--models-dir", models_dir, "baseline models directory");
  cmp->add_option("--out", compare_out, "comparison JSON output path");
  cmp->add_option("--k", k, "metric cutoff");
  cmp->add_flag("--with-oracle", with_oracle, "add the oracle upper-bound row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::load(config_path);

    auto apply_common = [&](CLI::App* cmd) {
      if (cmd->count("--data")) cfg.paths.data = data_path;
      if (cmd->count("--seed")) {
        cfg.seed = seed;
        cfg.generator.seed = seed;
        cfg.es.seed = seed;
      }
    };

    if (gen->parsed()) {
      apply_common(gen);
      if (gen->count("--pages")) cfg.generator.num_pages = pages;
      if (gen->count("--t")) {
        cfg.generator.items_per_page = t_max;
        cfg.t_max = static_cast<std::size_t>(t_max);
      }
      if (gen->count("--manifest")) cfg.paths.manifest = manifest;
      return cmd_gen_data(cfg);
    }
    if (xvr->parsed()) {
      apply_common(xvr);
      if (xvr->count("--xvr-dir")) cfg.paths.xvr_dir = xvr_dir;
      if (xvr->count("--pseudo-count")) cfg.xvr_pseudo_count = pseudo_count;
      return cmd_estimate_xvr(cfg);
    }
    if (train->parsed()) {
      apply_common(train);
      if (train->count("--xvr-dir")) cfg.paths.xvr_dir = xvr_dir;
      if (train->count("--checkpoint")) cfg.paths.checkpoint = checkpoint;
      if (train->count("--curve")) cfg.paths.curve = curve;
      if (train->count("--iterations")) cfg.es.iterations = iterations;
      if (train->count("--workers")) cfg.es.workers = workers;
      return cmd_train(cfg);
    }
    if (eval->parsed()) {
      apply_common(eval);
      if (eval->count("--xvr-dir")) cfg.paths.xvr_dir = xvr_dir;
      if (eval->count("--checkpoint")) cfg.paths.checkpoint = checkpoint;
      if (eval->count("--report")) cfg.paths.report = report;
      if (eval->count("--per-page")) cfg.paths.per_page = per_page;
      if (eval->count("--k")) cfg.eval_k = k;
      return cmd_eval(cfg, strategy, coeffs_text, part);
    }
    if (base->parsed()) {
      apply_common(base);
      if (base->count("--models-dir")) cfg.paths.models_dir = models_dir;
      return cmd_baseline_train(cfg, variant);
    }
    if (cmp->parsed()) {
      apply_common(cmp);
      if (cmp->count("--xvr-dir")) cfg.paths.xvr_dir = xvr_dir;
      if (cmp->count("--checkpoint")) cfg.paths.checkpoint = checkpoint;
      if (cmp->count("--models-dir")) cfg.paths.models_dir = models_dir;
      if (cmp->count("--out")) cfg.paths.compare = compare_out;
      if (cmp->count("--k")) cfg.eval_k = k;
      return cmd_compare(cfg, with_oracle);
    }
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
