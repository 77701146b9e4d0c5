#include "vrec/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include <json.hpp>

#include "vrec/rng.hpp"

namespace vrec {

using nlohmann::json;

void GeneratorConfig::validate() const {
  if (num_users < 1 || num_items < 1 || items_per_page < 1 || num_pages < 1) {
    throw ValidationError("generator: counts must be positive");
  }
  if (items_per_page > static_cast<int>(kMaxPageSlots)) {
    throw ValidationError("generator: items_per_page must be <= 50");
  }
  if (num_items < items_per_page) {
    throw ValidationError("generator: catalog smaller than one page");
  }
  if (clicks_per_page < 0.0 || clicks_per_page > items_per_page) {
    throw ValidationError("generator: clicks_per_page out of range");
  }
  auto cond_rate = [](double r, const char* name) {
    if (r < 0.0 || r > 1.0) {
      throw ValidationError(std::string("generator: ") + name +
                            " must be in [0,1]");
    }
  };
  cond_rate(cart_given_click, "cart_given_click");
  cond_rate(fav_given_click, "fav_given_click");
  // pay_given_click > 1 would demand more purchases than clicks, which the
  // click -> purchase funnel cannot produce.
  if (pay_given_click < 0.0 || pay_given_click > 1.0) {
    throw ValidationError(
        "generator: infeasible rate combination (purchase rate exceeds click rate)");
  }
  if (purchase_power_mix.empty()) {
    throw ValidationError("generator: purchase_power_mix is empty");
  }
  double mix_sum = 0.0;
  for (double w : purchase_power_mix) {
    if (w < 0.0) throw ValidationError("generator: negative segment weight");
    mix_sum += w;
  }
  if (!(mix_sum > 0.0)) throw ValidationError("generator: segment mix sums to zero");
  if (power_pay_boost < 0.0) throw ValidationError("generator: negative power boost");
  if (cart_pay_boost < 0.0) throw ValidationError("generator: negative cart boost");
  if (affinity_spread < 0.0 || feature_noise < 0.0) {
    throw ValidationError("generator: negative noise parameter");
  }
}

namespace {

struct CatalogItem {
  std::string id;
  double ctr = 0.0;
  double cvr = 0.0;
  double price = 1.0;
  double cart_affinity = 1.0;
  double fav_affinity = 1.0;
  double pay_affinity = 1.0;
};

struct SlotDraft {
  int catalog_index = 0;
  double ctr = 0.0;
  double cvr = 0.0;
  double p_click = 0.0;
  double cart_raw = 0.0;  // conditional rates before calibration
  double fav_raw = 0.0;
  double pay_raw = 0.0;
};

struct PageDraft {
  RequestContext context;
  std::vector<SlotDraft> slots;
};

constexpr double kMaxFlagProb = 0.95;

inline double clamp_prob(double p) { return std::clamp(p, 0.0, kMaxFlagProb); }

}  // namespace

Dataset generate(const GeneratorConfig& config) {
  config.validate();

  Rng catalog_rng(derive_seed(config.seed, 1));
  Rng page_rng(derive_seed(config.seed, 2));
  Rng flag_rng(derive_seed(config.seed, 3));

  // Item catalog with stable ids and per-item behavioral affinities.
  std::vector<CatalogItem> catalog(config.num_items);
  double cvr_sum = 0.0;
  for (int i = 0; i < config.num_items; ++i) {
    CatalogItem& item = catalog[i];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "item_%06d", i);
    item.id = buf;
    item.ctr = std::clamp(0.03 * catalog_rng.lognormal(0.0, 0.5), 1e-4, 0.5);
    item.cvr = std::clamp(0.01 * catalog_rng.lognormal(0.0, 0.7), 1e-4, 0.5);
    item.price = catalog_rng.lognormal(config.price_log_mu, config.price_log_sigma);
    item.cart_affinity = catalog_rng.lognormal(0.0, config.affinity_spread);
    item.fav_affinity = catalog_rng.lognormal(0.0, config.affinity_spread);
    item.pay_affinity = catalog_rng.lognormal(0.0, 0.5);
    cvr_sum += item.cvr;
  }
  const double mean_cvr = cvr_sum / config.num_items;

  const int power_levels = static_cast<int>(config.purchase_power_mix.size());
  double mix_total = 0.0;
  for (double w : config.purchase_power_mix) mix_total += w;

  // Pass 1: draw pages, displayed features and uncalibrated rates.
  std::vector<PageDraft> drafts;
  drafts.reserve(config.num_pages);
  std::vector<double> weights(config.items_per_page);
  double sum_click = 0.0, sum_cart = 0.0, sum_fav = 0.0;
  for (int p = 0; p < config.num_pages; ++p) {
    PageDraft draft;
    draft.context.age = page_rng.uniform_int(7);
    draft.context.gender = page_rng.uniform_int(3);
    double u = page_rng.uniform() * mix_total;
    int power = 0;
    for (; power + 1 < power_levels; ++power) {
      if (u < config.purchase_power_mix[power]) break;
      u -= config.purchase_power_mix[power];
    }
    draft.context.purchase_power = power;
    int page_id = 0;
    while (page_id < 9 && page_rng.bernoulli(0.35)) ++page_id;
    draft.context.page_id = page_id;
    draft.context.request_hour = page_rng.uniform_int(24);

    // Sample distinct catalog items for the page.
    std::unordered_set<int> chosen;
    draft.slots.resize(config.items_per_page);
    for (SlotDraft& slot : draft.slots) {
      int idx;
      do {
        idx = page_rng.uniform_int(config.num_items);
      } while (!chosen.insert(idx).second);
      slot.catalog_index = idx;
      const CatalogItem& item = catalog[idx];
      slot.ctr = std::clamp(
          item.ctr * page_rng.lognormal(0.0, config.feature_noise), 1e-4, 0.95);
      slot.cvr = std::clamp(
          item.cvr * page_rng.lognormal(0.0, config.feature_noise), 1e-4, 0.95);
    }

    // Click probability proportional to the planted-preference score,
    // normalized so each page spends the configured click budget.
    double wsum = 0.0;
    for (int i = 0; i < config.items_per_page; ++i) {
      ScoreInputs in;
      in.ctr = draft.slots[i].ctr;
      in.cvr = draft.slots[i].cvr;
      in.price = catalog[draft.slots[i].catalog_index].price;
      weights[i] = score_from_inputs(in, config.planted_preference,
                                     ScoreMode::click_only);
      wsum += weights[i];
    }
    const double power_mult = 1.0 + config.power_pay_boost * power;
    for (int i = 0; i < config.items_per_page; ++i) {
      SlotDraft& slot = draft.slots[i];
      const CatalogItem& item = catalog[slot.catalog_index];
      slot.p_click =
          wsum > 0.0 ? clamp_prob(config.clicks_per_page * weights[i] / wsum) : 0.0;
      slot.cart_raw = config.cart_given_click * item.cart_affinity;
      slot.fav_raw = config.fav_given_click * item.fav_affinity;
      slot.pay_raw = config.pay_given_click * item.pay_affinity *
                     (slot.cvr / mean_cvr) * power_mult;
      sum_click += slot.p_click;
      sum_cart += slot.p_click * slot.cart_raw;
      sum_fav += slot.p_click * slot.fav_raw;
    }
    drafts.push_back(std::move(draft));
  }

  // Pass 2: calibrate conditional rates so expected aggregate counts hit
  // the configured targets.
  const double cart_scale =
      sum_cart > 0.0 ? config.cart_given_click * sum_click / sum_cart : 0.0;
  const double fav_scale =
      sum_fav > 0.0 ? config.fav_given_click * sum_click / sum_fav : 0.0;
  double sum_pay = 0.0;
  for (const PageDraft& draft : drafts) {
    for (const SlotDraft& slot : draft.slots) {
      const double p_cart = clamp_prob(slot.cart_raw * cart_scale);
      sum_pay += slot.p_click * slot.pay_raw *
                 (1.0 + (config.cart_pay_boost - 1.0) * p_cart);
    }
  }
  const double pay_scale =
      sum_pay > 0.0 ? config.pay_given_click * sum_click / sum_pay : 0.0;

  // Pass 3: write features and sample flags down the funnel.
  Dataset data;
  data.pages.reserve(drafts.size());
  for (const PageDraft& draft : drafts) {
    PageLog page;
    page.context = draft.context;
    page.slots.reserve(draft.slots.size());
    for (const SlotDraft& slot : draft.slots) {
      const CatalogItem& item = catalog[slot.catalog_index];
      const double p_cart_cond = clamp_prob(slot.cart_raw * cart_scale);
      const double p_fav_cond = clamp_prob(slot.fav_raw * fav_scale);
      const double p_pay_cond = clamp_prob(slot.pay_raw * pay_scale);

      Slot out;
      out.item.item_id = item.id;
      out.item.ctr = slot.ctr;
      out.item.cvr = slot.cvr;
      out.item.price = item.price;
      out.item.p_cart = clamp_prob(slot.ctr * p_cart_cond);
      out.item.p_fav = clamp_prob(slot.ctr * p_fav_cond);

      out.flags.clicked = flag_rng.bernoulli(slot.p_click);
      if (out.flags.clicked) {
        out.flags.carted = flag_rng.bernoulli(p_cart_cond);
        out.flags.wishlisted = flag_rng.bernoulli(p_fav_cond);
        const double p_pay = out.flags.carted
                                 ? clamp_prob(p_pay_cond * config.cart_pay_boost)
                                 : p_pay_cond;
        out.flags.purchased = flag_rng.bernoulli(p_pay);
      }
      page.slots.push_back(std::move(out));
    }
    data.pages.push_back(std::move(page));
  }
  data.rebuild_universe();
  return data;
}

ActionCounts count_actions(const Dataset& data) {
  ActionCounts c;
  c.pages = static_cast<long>(data.pages.size());
  for (const PageLog& page : data.pages) {
    for (const Slot& s : page.slots) {
      ++c.slots;
      c.clicks += s.flags.clicked;
      c.carts += s.flags.carted;
      c.wishlists += s.flags.wishlisted;
      c.purchases += s.flags.purchased;
    }
  }
  return c;
}

std::string manifest_json(const GeneratorConfig& config, const ActionCounts& counts) {
  json doc;
  doc["pages"] = counts.pages;
  doc["slots"] = counts.slots;
  doc["clicks"] = counts.clicks;
  doc["carts"] = counts.carts;
  doc["wishlists"] = counts.wishlists;
  doc["purchases"] = counts.purchases;
  const double clicks = static_cast<double>(counts.clicks);
  doc["empirical"] = {
      {"clicks_per_page",
       counts.pages > 0 ? clicks / static_cast<double>(counts.pages) : 0.0},
      {"cart_given_click", counts.clicks > 0 ? counts.carts / clicks : 0.0},
      {"fav_given_click", counts.clicks > 0 ? counts.wishlists / clicks : 0.0},
      {"pay_given_click", counts.clicks > 0 ? counts.purchases / clicks : 0.0}};
  doc["targets"] = {{"clicks_per_page", config.clicks_per_page},
                    {"cart_given_click", config.cart_given_click},
                    {"fav_given_click", config.fav_given_click},
                    {"pay_given_click", config.pay_given_click}};
  doc["seed"] = config.seed;
  return doc.dump(2);
}

}  // namespace vrec
