#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "vrec/xvr.hpp"

using namespace vrec;

namespace {

Slot make_slot(const std::string& id, bool clicked, bool purchased,
               double price = 10.0) {
  Slot s;
  s.item.item_id = id;
  s.item.ctr = 0.1;
  s.item.cvr = 0.05;
  s.item.price = price;
  s.flags.clicked = clicked;
  s.flags.purchased = purchased;
  return s;
}

Dataset dataset_from_slots(std::vector<Slot> slots) {
  Dataset data;
  PageLog page;
  page.context = {1, 0, 1, 0, 12};
  page.slots = std::move(slots);
  data.pages.push_back(std::move(page));
  data.rebuild_universe();
  return data;
}

// Item A: 3 clicks, 1 converting. Item B: 7 clicks, none converting.
// Global click ratio: 1/10.
Dataset smoothing_fixture() {
  std::vector<Slot> slots;
  slots.push_back(make_slot("A", true, true));
  slots.push_back(make_slot("A", true, false));
  slots.push_back(make_slot("A", true, false));
  for (int i = 0; i < 7; ++i) slots.push_back(make_slot("B", true, false));
  return dataset_from_slots(std::move(slots));
}

}  // namespace

TEST_SUITE("xvr") {

TEST_CASE("raw ratio with zero pseudo-count") {
  XvrTable table;
  table.estimate(smoothing_fixture(), ActionType::Click, 0.0);
  CHECK(table.lookup("A", ActionType::Click) == doctest::Approx(1.0 / 3.0));
  CHECK(table.lookup("B", ActionType::Click) == doctest::Approx(0.0));
  // unseen item falls back to the global ratio
  CHECK(table.lookup("zzz", ActionType::Click) == doctest::Approx(0.1));
}

TEST_CASE("smoothing formula: (1 + 2*0.1) / (3 + 2) = 0.24") {
  XvrTable table;
  table.estimate(smoothing_fixture(), ActionType::Click, 2.0);
  CHECK(table.slice(ActionType::Click).global == doctest::Approx(0.1));
  CHECK(table.lookup("A", ActionType::Click) == doctest::Approx(0.24));
}

TEST_CASE("purchase action converts identically") {
  XvrTable table;
  Dataset data = dataset_from_slots({make_slot("A", true, true)});
  table.estimate(data, ActionType::Purchase, 5.0);
  CHECK(table.lookup("A", ActionType::Purchase) == 1.0);
  // lookup is 1 even without an estimate
  XvrTable empty;
  CHECK(empty.lookup("anything", ActionType::Purchase) == 1.0);
}

TEST_CASE("estimating an absent action demands a prior") {
  Dataset data = dataset_from_slots({make_slot("A", true, false)});
  XvrTable table;
  CHECK_THROWS_WITH_AS(table.estimate(data, ActionType::Cart, 1.0),
                       doctest::Contains("prior"), ValidationError);
  table.set_global(ActionType::Cart, 0.05);
  CHECK(table.lookup("A", ActionType::Cart) == doctest::Approx(0.05));
}

TEST_CASE("shrinkage: pseudo-count to infinity approaches the global ratio") {
  const Dataset data = smoothing_fixture();
  for (double pc : {1.0, 10.0, 1e3, 1e6}) {
    XvrTable table;
    table.estimate(data, ActionType::Click, pc);
    const double g = table.slice(ActionType::Click).global;
    const double prev_gap = std::abs(table.lookup("A", ActionType::Click) - g);
    if (pc >= 1e6) CHECK(prev_gap < 1e-6);
  }
  // pc = 0 with n > 0 gives the raw ratio exactly
  XvrTable raw;
  raw.estimate(data, ActionType::Click, 0.0);
  CHECK(raw.lookup("A", ActionType::Click) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("monetized value") {
  XvrTable table = testing::flat_table();
  ItemFeatures item{"a", 0.1, 0.05, 50.0, {}, {}};
  ActionFlags flags;
  SUBCASE("flag unset gives zero") {
    CHECK(monetized_value(flags, item, table, ActionType::Click) == 0.0);
  }
  SUBCASE("clicked item: xvr * price") {
    table.set_global(ActionType::Click, 0.02);
    flags.clicked = true;
    CHECK(monetized_value(flags, item, table, ActionType::Click) ==
          doctest::Approx(1.0));
  }
  SUBCASE("purchase pays full price") {
    flags.purchased = true;
    item.price = 30.0;
    CHECK(monetized_value(flags, item, table, ActionType::Purchase) ==
          doctest::Approx(30.0));
  }
}

TEST_CASE("expected gmv") {
  XvrTable table;
  table.set_global(ActionType::Click, 0.5);

  SUBCASE("no flags set gives zero") {
    Dataset data = dataset_from_slots({make_slot("A", false, false)});
    const std::vector<ActionType> actions{ActionType::Click};
    CHECK(expected_gmv(data.pages, table, actions).total == 0.0);
  }
  SUBCASE("single clicked slot") {
    Dataset data = dataset_from_slots({make_slot("A", true, false, 10.0)});
    const std::vector<ActionType> actions{ActionType::Click};
    const GmvSummary g = expected_gmv(data.pages, table, actions);
    CHECK(g.total == doctest::Approx(5.0));
    CHECK(g.per_page_mean == doctest::Approx(5.0));
  }
  SUBCASE("monotone in the action set") {
    const Dataset data = testing::random_dataset(21, 30, 10);
    XvrTable t = testing::flat_table();
    const std::vector<ActionType> small{ActionType::Click};
    const std::vector<ActionType> big{ActionType::Click, ActionType::Purchase};
    CHECK(expected_gmv(data.pages, t, big).total >=
          expected_gmv(data.pages, t, small).total);
  }
  SUBCASE("empty pages defined as zero") {
    const std::vector<PageLog> none;
    const std::vector<ActionType> actions{ActionType::Click};
    CHECK(expected_gmv(none, table, actions).total == 0.0);
  }
  SUBCASE("empty action set is an error") {
    Dataset data = dataset_from_slots({make_slot("A", true, false)});
    const std::vector<ActionType> actions;
    CHECK_THROWS_AS(expected_gmv(data.pages, table, actions), ValidationError);
  }
}

TEST_CASE("expected gmv equals the brute-force triple loop") {
  const Dataset data = testing::random_dataset(33, 25, 7);
  const XvrTable table = testing::flat_table(0.12, 0.3, 0.22);
  const std::vector<ActionType> actions{ActionType::Click, ActionType::Cart,
                                        ActionType::Wishlist,
                                        ActionType::Purchase};
  double brute = 0.0;
  for (const PageLog& page : data.pages) {
    for (const Slot& s : page.slots) {
      for (ActionType a : actions) {
        if (!s.flags.has(a)) continue;
        brute += table.lookup(s.item.item_id, a) * s.item.price;
      }
    }
  }
  CHECK(expected_gmv(data.pages, table, actions).total == doctest::Approx(brute));
}

TEST_CASE("xvr table serialization round-trips") {
  XvrTable table;
  table.estimate(smoothing_fixture(), ActionType::Click, 2.0);
  const std::string text = table.serialize_action(ActionType::Click);
  XvrTable back;
  back.parse_action(text);
  CHECK(back.lookup("A", ActionType::Click) ==
        table.lookup("A", ActionType::Click));
  CHECK(back.lookup("unseen", ActionType::Click) ==
        table.lookup("unseen", ActionType::Click));
}

}  // TEST_SUITE
