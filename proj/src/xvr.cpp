#include "vrec/xvr.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vrec {

using nlohmann::json;

void XvrTable::estimate(const Dataset& data, ActionType action,
                        double pseudo_count) {
  if (pseudo_count < 0.0) {
    throw ValidationError("pseudo_count must be >= 0");
  }
  std::unordered_map<std::string, long> n_action;
  std::unordered_map<std::string, long> n_both;
  long total_action = 0;
  long total_both = 0;
  for (const PageLog& page : data.pages) {
    for (const Slot& s : page.slots) {
      if (!s.flags.has(action)) continue;
      ++n_action[s.item.item_id];
      ++total_action;
      if (s.flags.purchased) {
        ++n_both[s.item.item_id];
        ++total_both;
      }
    }
  }
  if (total_action == 0) {
    throw ValidationError(
        std::string("no occurrences of action '") + action_name(action) +
        "' in the data; the global ratio is undefined. Supply a prior rate "
        "via set_global instead.");
  }
  ActionSlice slice;
  slice.present = true;
  slice.pseudo_count = pseudo_count;
  slice.global = static_cast<double>(total_both) / static_cast<double>(total_action);
  for (const auto& [id, n] : n_action) {
    const long both = n_both.count(id) ? n_both.at(id) : 0;
    slice.items[id] = (static_cast<double>(both) + pseudo_count * slice.global) /
                      (static_cast<double>(n) + pseudo_count);
  }
  slices_[static_cast<int>(action)] = std::move(slice);
}

void XvrTable::set_global(ActionType action, double rate, double pseudo_count) {
  if (rate < 0.0 || rate > 1.0) {
    throw ValidationError("global xvr rate out of range [0,1]");
  }
  ActionSlice slice;
  slice.present = true;
  slice.pseudo_count = pseudo_count;
  slice.global = rate;
  slices_[static_cast<int>(action)] = std::move(slice);
}

bool XvrTable::has(ActionType action) const {
  if (action == ActionType::Purchase) return true;
  return slices_[static_cast<int>(action)].present;
}

double XvrTable::lookup(const std::string& item_id, ActionType action) const {
  if (action == ActionType::Purchase) return 1.0;
  const ActionSlice& slice = slices_[static_cast<int>(action)];
  if (!slice.present) {
    throw ValidationError(std::string("no xvr estimate for action '") +
                          action_name(action) + "'");
  }
  auto it = slice.items.find(item_id);
  return it != slice.items.end() ? it->second : slice.global;
}

const XvrTable::ActionSlice& XvrTable::slice(ActionType action) const {
  return slices_[static_cast<int>(action)];
}

std::string XvrTable::serialize_action(ActionType action) const {
  const ActionSlice& slice = slices_[static_cast<int>(action)];
  if (action != ActionType::Purchase && !slice.present) {
    throw ValidationError(std::string("no xvr estimate for action '") +
                          action_name(action) + "'");
  }
  json doc;
  doc["action"] = action_name(action);
  if (action == ActionType::Purchase && !slice.present) {
    doc["pseudo_count"] = 0.0;
    doc["global"] = 1.0;
    doc["items"] = json::object();
  } else {
    doc["pseudo_count"] = slice.pseudo_count;
    doc["global"] = slice.global;
    json items = json::object();
    for (const auto& [id, v] : slice.items) items[id] = v;
    doc["items"] = std::move(items);
  }
  return doc.dump();
}

void XvrTable::save_action(ActionType action, const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write xvr file: " + path);
  out << serialize_action(action) << '\n';
}

void XvrTable::parse_action(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed xvr JSON: ") + e.what());
  }
  const ActionType action = action_from_name(doc.at("action").get<std::string>());
  ActionSlice slice;
  slice.present = true;
  slice.pseudo_count = doc.at("pseudo_count").get<double>();
  slice.global = doc.at("global").get<double>();
  for (const auto& [id, v] : doc.at("items").items()) {
    const double x = v.get<double>();
    if (x < 0.0 || x > 1.0) {
      throw ValidationError("xvr value out of range [0,1] for item '" + id + "'");
    }
    slice.items[id] = x;
  }
  slices_[static_cast<int>(action)] = std::move(slice);
}

void XvrTable::load_action(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open xvr file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  parse_action(buf.str());
}

XvrTable estimate_xvr(const Dataset& data, std::span<const ActionType> actions,
                      double pseudo_count) {
  XvrTable table;
  for (ActionType a : actions) {
    if (a == ActionType::Purchase) continue;  // identically 1, nothing to fit
    table.estimate(data, a, pseudo_count);
  }
  return table;
}

std::string xvr_file_name(ActionType action) {
  return std::string("xvr_") + action_name(action) + ".json";
}

void save_xvr_dir(const XvrTable& table, const std::string& dir,
                  std::span<const ActionType> actions) {
  for (ActionType a : actions) {
    if (a == ActionType::Purchase) continue;
    table.save_action(a, dir + "/" + xvr_file_name(a));
  }
}

XvrTable load_xvr_dir(const std::string& dir) {
  XvrTable table;
  bool any = false;
  for (ActionType a : kAllActions) {
    if (a == ActionType::Purchase) continue;
    const std::string path = dir + "/" + xvr_file_name(a);
    if (std::ifstream probe(path); probe) {
      table.load_action(path);
      any = true;
    }
  }
  if (!any) {
    throw ValidationError("no xvr_<action>.json files found in: " + dir);
  }
  return table;
}

double monetized_value(const ActionFlags& flags, const ItemFeatures& item,
                       const XvrTable& table, ActionType action) {
  if (!flags.has(action)) return 0.0;
  return table.lookup(item.item_id, action) * item.price;
}

GmvSummary expected_gmv(std::span<const PageLog> pages, const XvrTable& table,
                        std::span<const ActionType> actions) {
  if (actions.empty()) throw ValidationError("action set must be non-empty");
  GmvSummary out;
  for (const PageLog& page : pages) {
    for (const Slot& s : page.slots) {
      for (ActionType a : actions) {
        out.total += monetized_value(s.flags, s.item, table, a);
      }
    }
  }
  out.per_page_mean = pages.empty() ? 0.0 : out.total / static_cast<double>(pages.size());
  return out;
}

}  // namespace vrec
