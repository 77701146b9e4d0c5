#include "vrec/item_cf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vrec/ranking.hpp"

namespace vrec {

using nlohmann::json;

ItemCfModel ItemCfModel::train(const Dataset& data, const ItemCfConfig& config) {
  if (config.neighborhood < 1) {
    throw ValidationError("item-cf: neighborhood must be >= 1");
  }
  // Binary page-item click vectors: per item the set of pages with a click,
  // plus impression counts for the fallback click rate.
  std::map<std::string, long> click_pages;
  std::map<std::string, long> impressions;
  std::map<std::pair<std::string, std::string>, long> co_clicks;
  long total_clicks = 0;
  for (const PageLog& page : data.pages) {
    std::set<std::string> clicked;
    for (const Slot& s : page.slots) {
      ++impressions[s.item.item_id];
      if (s.flags.clicked) clicked.insert(s.item.item_id);
    }
    total_clicks += static_cast<long>(clicked.size());
    for (const std::string& id : clicked) ++click_pages[id];
    for (auto a = clicked.begin(); a != clicked.end(); ++a) {
      for (auto b = std::next(a); b != clicked.end(); ++b) {
        ++co_clicks[{*a, *b}];
      }
    }
  }
  if (total_clicks == 0) {
    throw ValidationError("item-cf: no clicks in the training data");
  }

  ItemCfModel model;
  model.neighborhood_ = config.neighborhood;
  for (const auto& [id, n] : impressions) {
    const long c = click_pages.count(id) ? click_pages.at(id) : 0;
    model.click_rate_[id] = static_cast<double>(c) / static_cast<double>(n);
  }

  std::map<std::string, std::vector<std::pair<std::string, double>>> sims;
  for (const auto& [pair, both] : co_clicks) {
    const auto& [a, b] = pair;
    const double sim = static_cast<double>(both) /
                       std::sqrt(static_cast<double>(click_pages.at(a)) *
                                 static_cast<double>(click_pages.at(b)));
    sims[a].emplace_back(b, sim);
    sims[b].emplace_back(a, sim);
  }
  for (auto& [id, list] : sims) {
    std::sort(list.begin(), list.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    if (list.size() > static_cast<std::size_t>(config.neighborhood)) {
      list.resize(config.neighborhood);
    }
    model.neighbors_[id] = std::move(list);
  }
  return model;
}

double ItemCfModel::similarity(const std::string& item,
                               const std::string& other) const {
  auto it = neighbors_.find(item);
  if (it == neighbors_.end()) return 0.0;
  for (const auto& [id, sim] : it->second) {
    if (id == other) return sim;
  }
  return 0.0;
}

double ItemCfModel::global_click_rate(const std::string& item) const {
  auto it = click_rate_.find(item);
  return it != click_rate_.end() ? it->second : 0.0;
}

std::vector<int> ItemCfModel::rank(const PageLog& page) const {
  std::vector<std::string> clicked;
  for (const Slot& s : page.slots) {
    if (s.flags.clicked) clicked.push_back(s.item.item_id);
  }
  std::vector<double> scores(page.size(), 0.0);
  for (std::size_t i = 0; i < page.size(); ++i) {
    const std::string& id = page.slots[i].item.item_id;
    if (clicked.empty()) {
      scores[i] = global_click_rate(id);
      continue;
    }
    double s = 0.0;
    for (const std::string& c : clicked) {
      if (c == id) continue;  // no self-similarity
      s += similarity(id, c);
    }
    scores[i] = s;
  }
  return permutation_from_scores(scores);
}

std::string ItemCfModel::to_json() const {
  json doc;
  doc["model"] = "item_cf";
  doc["neighborhood"] = neighborhood_;
  json rates = json::object();
  for (const auto& [id, r] : click_rate_) rates[id] = r;
  doc["click_rate"] = std::move(rates);
  json neigh = json::object();
  for (const auto& [id, list] : neighbors_) {
    json arr = json::array();
    for (const auto& [other, sim] : list) arr.push_back(json::array({other, sim}));
    neigh[id] = std::move(arr);
  }
  doc["neighbors"] = std::move(neigh);
  return doc.dump();
}

ItemCfModel ItemCfModel::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed item-cf JSON: ") + e.what());
  }
  if (doc.at("model").get<std::string>() != "item_cf") {
    throw ValidationError("not an item-cf model file");
  }
  ItemCfModel model;
  model.neighborhood_ = doc.at("neighborhood").get<int>();
  for (const auto& [id, r] : doc.at("click_rate").items()) {
    model.click_rate_[id] = r.get<double>();
  }
  for (const auto& [id, arr] : doc.at("neighbors").items()) {
    std::vector<std::pair<std::string, double>> list;
    for (const auto& entry : arr) {
      list.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<double>());
    }
    model.neighbors_[id] = std::move(list);
  }
  return model;
}

void ItemCfModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write model file: " + path);
  out << to_json() << '\n';
}

ItemCfModel ItemCfModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace vrec
