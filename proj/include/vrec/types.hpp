#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vrec {

// Thrown for bad input data or violated domain invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a computation produces a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// User action types. Integer codes are part of the serialization contract
// and must not be reordered.
enum class ActionType : int {
  Click = 0,
  Cart = 1,
  Wishlist = 2,
  Purchase = 3,
};

inline constexpr std::array<ActionType, 4> kAllActions = {
    ActionType::Click, ActionType::Cart, ActionType::Wishlist,
    ActionType::Purchase};

inline const char* action_name(ActionType a) {
  switch (a) {
    case ActionType::Click: return "click";
    case ActionType::Cart: return "cart";
    case ActionType::Wishlist: return "wishlist";
    case ActionType::Purchase: return "purchase";
  }
  return "unknown";
}

inline ActionType action_from_name(std::string_view name) {
  for (ActionType a : kAllActions) {
    if (name == action_name(a)) return a;
  }
  throw ValidationError("unknown action name: " + std::string(name));
}

// Observed feedback on one slot. The flags are independent booleans; the
// behavioral funnel (click before cart etc.) is not enforced on logs.
struct ActionFlags {
  bool clicked = false;
  bool carted = false;
  bool wishlisted = false;
  bool purchased = false;

  bool has(ActionType a) const {
    switch (a) {
      case ActionType::Click: return clicked;
      case ActionType::Cart: return carted;
      case ActionType::Wishlist: return wishlisted;
      case ActionType::Purchase: return purchased;
    }
    return false;
  }

  bool any() const { return clicked || carted || wishlisted || purchased; }

  bool operator==(const ActionFlags&) const = default;
};

// Per-item predicted probabilities and unit price.
struct ItemFeatures {
  std::string item_id;
  double ctr = 0.0;
  double cvr = 0.0;
  double price = 1.0;
  std::optional<double> p_cart;
  std::optional<double> p_fav;

  void validate() const {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(ctr)) {
      throw ValidationError("ctr out of range [0,1] for item '" + item_id + "'");
    }
    if (!in_unit(cvr)) {
      throw ValidationError("cvr out of range [0,1] for item '" + item_id + "'");
    }
    if (p_cart && !in_unit(*p_cart)) {
      throw ValidationError("p_cart out of range [0,1] for item '" + item_id + "'");
    }
    if (p_fav && !in_unit(*p_fav)) {
      throw ValidationError("p_fav out of range [0,1] for item '" + item_id + "'");
    }
    if (!(price > 0.0) || !std::isfinite(price)) {
      throw ValidationError("price must be positive and finite for item '" +
                            item_id + "'");
    }
  }

  bool operator==(const ItemFeatures&) const = default;
};

// Request-level context. Categorical codes are raw integers; the encoding
// is chosen by the data producer and carried through unchanged.
struct RequestContext {
  int age = 0;
  int gender = 0;
  int purchase_power = 0;
  int page_id = 0;
  int request_hour = 0;

  void validate() const {
    if (page_id < 0) throw ValidationError("page_id must be >= 0");
    if (request_hour < 0 || request_hour > 23) {
      throw ValidationError("request_hour out of range [0,23]");
    }
  }

  bool operator==(const RequestContext&) const = default;
};

inline constexpr std::size_t kMaxPageSlots = 50;

struct Slot {
  ItemFeatures item;
  ActionFlags flags;

  bool operator==(const Slot&) const = default;
};

// One user request: context plus the items in the order they were shown.
struct PageLog {
  RequestContext context;
  std::vector<Slot> slots;

  std::size_t size() const { return slots.size(); }

  void validate() const {
    if (slots.empty()) throw ValidationError("page has no slots");
    if (slots.size() > kMaxPageSlots) {
      throw ValidationError("page has " + std::to_string(slots.size()) +
                            " slots; max is " + std::to_string(kMaxPageSlots));
    }
    context.validate();
    for (const Slot& s : slots) s.item.validate();
  }

  bool operator==(const PageLog&) const = default;
};

struct Dataset {
  std::vector<PageLog> pages;
  std::set<std::string> item_universe;

  void rebuild_universe() {
    item_universe.clear();
    for (const PageLog& p : pages) {
      for (const Slot& s : p.slots) item_universe.insert(s.item.item_id);
    }
  }

  void validate() const {
    for (const PageLog& p : pages) {
      p.validate();
      for (const Slot& s : p.slots) {
        if (!item_universe.count(s.item.item_id)) {
          throw ValidationError("item '" + s.item.item_id +
                                "' missing from item universe");
        }
      }
    }
  }

  bool operator==(const Dataset&) const = default;
};

}  // namespace vrec
