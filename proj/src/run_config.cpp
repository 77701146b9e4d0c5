#include "vrec/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vrec {

using nlohmann::json;

namespace {

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_generator(const json& g, GeneratorConfig& out) {
  read_into(g, "num_users", out.num_users);
  read_into(g, "num_items", out.num_items);
  read_into(g, "items_per_page", out.items_per_page);
  read_into(g, "num_pages", out.num_pages);
  read_into(g, "clicks_per_page", out.clicks_per_page);
  read_into(g, "cart_given_click", out.cart_given_click);
  read_into(g, "fav_given_click", out.fav_given_click);
  read_into(g, "pay_given_click", out.pay_given_click);
  read_into(g, "purchase_power_mix", out.purchase_power_mix);
  read_into(g, "power_pay_boost", out.power_pay_boost);
  read_into(g, "price_log_mu", out.price_log_mu);
  read_into(g, "price_log_sigma", out.price_log_sigma);
  read_into(g, "affinity_spread", out.affinity_spread);
  read_into(g, "cart_pay_boost", out.cart_pay_boost);
  read_into(g, "feature_noise", out.feature_noise);
  read_into(g, "seed", out.seed);
  if (g.contains("planted_preference")) {
    const json& pp = g.at("planted_preference");
    read_into(pp, "alpha_click", out.planted_preference.alpha_click);
    read_into(pp, "alpha_cart", out.planted_preference.alpha_cart);
    read_into(pp, "alpha_fav", out.planted_preference.alpha_fav);
    read_into(pp, "beta_click", out.planted_preference.beta_click);
    read_into(pp, "beta_cart", out.planted_preference.beta_cart);
    read_into(pp, "beta_fav", out.planted_preference.beta_fav);
    read_into(pp, "gamma", out.planted_preference.gamma);
  }
}

void read_pointwise(const json& p, PointwiseConfig& out) {
  if (p.contains("variant")) {
    out.variant = ranker_variant_from_name(p.at("variant").get<std::string>());
  }
  read_into(p, "l2_weight", out.l2_weight);
  read_into(p, "learning_rate", out.learning_rate);
  read_into(p, "batch_size", out.batch_size);
  read_into(p, "epochs", out.epochs);
  read_into(p, "seed", out.seed);
}

json generator_to_json(const GeneratorConfig& g) {
  json pp;
  pp["alpha_click"] = g.planted_preference.alpha_click;
  pp["alpha_cart"] = g.planted_preference.alpha_cart;
  pp["alpha_fav"] = g.planted_preference.alpha_fav;
  pp["beta_click"] = g.planted_preference.beta_click;
  pp["beta_cart"] = g.planted_preference.beta_cart;
  pp["beta_fav"] = g.planted_preference.beta_fav;
  pp["gamma"] = g.planted_preference.gamma;
  return json{{"num_users", g.num_users},
              {"num_items", g.num_items},
              {"items_per_page", g.items_per_page},
              {"num_pages", g.num_pages},
              {"clicks_per_page", g.clicks_per_page},
              {"cart_given_click", g.cart_given_click},
              {"fav_given_click", g.fav_given_click},
              {"pay_given_click", g.pay_given_click},
              {"purchase_power_mix", g.purchase_power_mix},
              {"power_pay_boost", g.power_pay_boost},
              {"price_log_mu", g.price_log_mu},
              {"price_log_sigma", g.price_log_sigma},
              {"affinity_spread", g.affinity_spread},
              {"cart_pay_boost", g.cart_pay_boost},
              {"feature_noise", g.feature_noise},
              {"planted_preference", pp},
              {"seed", g.seed}};
}

json pointwise_to_json(const PointwiseConfig& p) {
  return json{{"variant", ranker_variant_name(p.variant)},
              {"l2_weight", p.l2_weight},
              {"learning_rate", p.learning_rate},
              {"batch_size", p.batch_size},
              {"epochs", p.epochs},
              {"seed", p.seed}};
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed config JSON: ") + e.what());
  }
  RunConfig c;
  read_into(doc, "seed", c.seed);
  read_into(doc, "t_max", c.t_max);
  if (doc.contains("paths")) {
    const json& p = doc.at("paths");
    read_into(p, "data", c.paths.data);
    read_into(p, "manifest", c.paths.manifest);
    read_into(p, "xvr_dir", c.paths.xvr_dir);
    read_into(p, "checkpoint", c.paths.checkpoint);
    read_into(p, "curve", c.paths.curve);
    read_into(p, "report", c.paths.report);
    read_into(p, "per_page", c.paths.per_page);
    read_into(p, "models_dir", c.paths.models_dir);
    read_into(p, "compare", c.paths.compare);
  }
  if (doc.contains("generator")) read_generator(doc.at("generator"), c.generator);
  if (doc.contains("xvr")) {
    read_into(doc.at("xvr"), "pseudo_count", c.xvr_pseudo_count);
    read_into(doc.at("xvr"), "actions", c.xvr_actions);
  }
  if (doc.contains("reward")) {
    const json& r = doc.at("reward");
    if (r.contains("mode")) {
      const auto names = r.at("mode").get<std::vector<std::string>>();
      c.reward_mode = RewardMode::from_names(names);
    }
    if (r.contains("weight_scheme")) {
      c.weight_scheme =
          weight_scheme_from_name(r.at("weight_scheme").get<std::string>());
    }
  }
  if (doc.contains("ranking")) {
    const json& r = doc.at("ranking");
    if (r.contains("mode")) {
      c.score_mode = score_mode_from_name(r.at("mode").get<std::string>());
    }
    read_into(r, "clamp", c.coefficient_clamp);
  }
  if (doc.contains("es")) {
    const json& e = doc.at("es");
    read_into(e, "sigma", c.es.sigma);
    read_into(e, "learning_rate", c.es.learning_rate);
    read_into(e, "population", c.es.population);
    read_into(e, "antithetic", c.es.antithetic);
    if (e.contains("normalization")) {
      c.es.normalization =
          reward_norm_from_name(e.at("normalization").get<std::string>());
    }
    read_into(e, "iterations", c.es.iterations);
    read_into(e, "seed", c.es.seed);
    read_into(e, "workers", c.es.workers);
    read_into(e, "pages_per_iteration", c.pages_per_iteration);
  }
  if (doc.contains("split")) {
    const json& s = doc.at("split");
    if (s.contains("method")) {
      c.split.method = split_method_from_name(s.at("method").get<std::string>());
    }
    read_into(s, "train_fraction", c.split.train_fraction);
    read_into(s, "seed", c.split.seed);
  }
  if (doc.contains("eval")) {
    read_into(doc.at("eval"), "k", c.eval_k);
    if (doc.at("eval").contains("relevance")) {
      c.relevance = relevance_rule_from_name(
          doc.at("eval").at("relevance").get<std::string>());
    }
  }
  if (doc.contains("baselines")) {
    const json& b = doc.at("baselines");
    if (b.contains("item_cf")) {
      read_into(b.at("item_cf"), "neighborhood", c.item_cf.neighborhood);
    }
    if (b.contains("logistic")) read_pointwise(b.at("logistic"), c.logistic);
    if (b.contains("mlp")) read_pointwise(b.at("mlp"), c.mlp);
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string RunConfig::to_json_text() const {
  json doc;
  doc["seed"] = seed;
  doc["t_max"] = t_max;
  doc["paths"] = {{"data", paths.data},
                  {"manifest", paths.manifest},
                  {"xvr_dir", paths.xvr_dir},
                  {"checkpoint", paths.checkpoint},
                  {"curve", paths.curve},
                  {"report", paths.report},
                  {"per_page", paths.per_page},
                  {"models_dir", paths.models_dir},
                  {"compare", paths.compare}};
  doc["generator"] = generator_to_json(generator);
  doc["xvr"] = {{"pseudo_count", xvr_pseudo_count}, {"actions", xvr_actions}};
  doc["reward"] = {{"mode", reward_mode.names()},
                   {"weight_scheme", weight_scheme_name(weight_scheme)}};
  doc["ranking"] = {{"mode", score_mode_name(score_mode)},
                    {"clamp", coefficient_clamp}};
  doc["es"] = {{"sigma", es.sigma},
               {"learning_rate", es.learning_rate},
               {"population", es.population},
               {"antithetic", es.antithetic},
               {"normalization", reward_norm_name(es.normalization)},
               {"iterations", es.iterations},
               {"seed", es.seed},
               {"workers", es.workers},
               {"pages_per_iteration", pages_per_iteration}};
  doc["split"] = {{"method", split_method_name(split.method)},
                  {"train_fraction", split.train_fraction},
                  {"seed", split.seed}};
  doc["eval"] = {{"k", eval_k}, {"relevance", relevance_rule_name(relevance)}};
  doc["baselines"] = {{"item_cf", {{"neighborhood", item_cf.neighborhood}}},
                      {"logistic", pointwise_to_json(logistic)},
                      {"mlp", pointwise_to_json(mlp)}};
  return doc.dump(2);
}

}  // namespace vrec
