#include "vrec/log_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vrec {
namespace {

using nlohmann::json;

bool flag_value(const json& item, const char* key) {
  if (!item.contains(key)) return false;
  const json& v = item.at(key);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) {
    const int i = v.get<int>();
    if (i == 0 || i == 1) return i == 1;
  }
  throw ValidationError("flag '" + std::string(key) + "' must be 0 or 1");
}

PageLog parse_page(const json& rec) {
  PageLog page;
  if (!rec.is_object() || !rec.contains("ctx") || !rec.contains("items")) {
    throw ValidationError("record must have 'ctx' and 'items'");
  }
  const json& ctx = rec.at("ctx");
  page.context.age = ctx.at("age").get<int>();
  page.context.gender = ctx.at("gender").get<int>();
  page.context.purchase_power = ctx.at("power").get<int>();
  page.context.page_id = ctx.at("page_id").get<int>();
  page.context.request_hour = ctx.at("hour").get<int>();

  const json& items = rec.at("items");
  if (!items.is_array()) {
    throw ValidationError("'items' must be an array");
  }
  for (const json& it : items) {
    Slot slot;
    slot.item.item_id = it.at("id").get<std::string>();
    slot.item.ctr = it.at("ctr").get<double>();
    slot.item.cvr = it.at("cvr").get<double>();
    slot.item.price = it.at("price").get<double>();
    if (it.contains("p_cart")) slot.item.p_cart = it.at("p_cart").get<double>();
    if (it.contains("p_fav")) slot.item.p_fav = it.at("p_fav").get<double>();
    slot.flags.clicked = flag_value(it, "clicked");
    slot.flags.carted = flag_value(it, "carted");
    slot.flags.wishlisted = flag_value(it, "wishlisted");
    slot.flags.purchased = flag_value(it, "purchased");
    page.slots.push_back(std::move(slot));
  }
  return page;
}

json page_to_json(const PageLog& page) {
  json rec;
  rec["ctx"] = {{"age", page.context.age},
                {"gender", page.context.gender},
                {"power", page.context.purchase_power},
                {"page_id", page.context.page_id},
                {"hour", page.context.request_hour}};
  json items = json::array();
  for (const Slot& s : page.slots) {
    json it;
    it["id"] = s.item.item_id;
    it["ctr"] = s.item.ctr;
    it["cvr"] = s.item.cvr;
    it["price"] = s.item.price;
    if (s.item.p_cart) it["p_cart"] = *s.item.p_cart;
    if (s.item.p_fav) it["p_fav"] = *s.item.p_fav;
    it["clicked"] = s.flags.clicked ? 1 : 0;
    it["carted"] = s.flags.carted ? 1 : 0;
    it["wishlisted"] = s.flags.wishlisted ? 1 : 0;
    it["purchased"] = s.flags.purchased ? 1 : 0;
    items.push_back(std::move(it));
  }
  rec["items"] = std::move(items);
  return rec;
}

}  // namespace

Dataset parse_logs(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty line");
    }
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": malformed JSON: " + e.what());
    }
    PageLog page;
    try {
      page = parse_page(rec);
      page.validate();
    } catch (const json::exception& e) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": bad record: " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
    data.pages.push_back(std::move(page));
  }
  data.rebuild_universe();
  return data;
}

Dataset load_logs(const std::string& path, LogFormat format) {
  (void)format;  // only jsonl for now
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open log file: " + path);
  return parse_logs(in);
}

std::string serialize_logs(const Dataset& data) {
  std::ostringstream out;
  for (const PageLog& page : data.pages) {
    out << page_to_json(page).dump() << '\n';
  }
  return out.str();
}

void save_logs(const Dataset& data, const std::string& path, LogFormat format) {
  (void)format;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write log file: " + path);
  out << serialize_logs(data);
}

}  // namespace vrec
