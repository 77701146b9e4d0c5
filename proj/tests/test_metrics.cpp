#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "test_helpers.hpp"
#include "vrec/metrics.hpp"
#include "vrec/replay.hpp"

using namespace vrec;

namespace {

// Independent reference: derives each relevant slot's position from pi,
// sorts positions, and accumulates precisions in ascending-position order.
PrMap brute_force_pr_map(const std::vector<int>& pi, const std::set<int>& relevant,
                         int k) {
  PrMap out;
  if (relevant.empty()) return out;
  std::vector<int> positions;
  for (int slot : relevant) positions.push_back(pi[slot]);
  std::sort(positions.begin(), positions.end());
  int hits = 0;
  double ap = 0.0;
  for (int pos : positions) {
    if (pos >= k) break;
    ++hits;
    ap += static_cast<double>(hits) / static_cast<double>(pos + 1);
  }
  out.precision = static_cast<double>(hits) / k;
  out.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  out.average_precision = ap / std::min<int>(static_cast<int>(relevant.size()), k);
  return out;
}

std::vector<int> identity(int n) {
  std::vector<int> pi(n);
  for (int i = 0; i < n; ++i) pi[i] = i;
  return pi;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("single relevant item at the top") {
  const std::vector<int> pi = identity(30);
  const PrMap m = precision_recall_map(pi, {0}, 20);
  CHECK(m.precision == doctest::Approx(1.0 / 20.0));
  CHECK(m.recall == doctest::Approx(1.0));
  CHECK(m.average_precision == doctest::Approx(1.0));
}

TEST_CASE("single relevant item at position 1 halves the AP") {
  const std::vector<int> pi = identity(30);
  const PrMap m = precision_recall_map(pi, {1}, 20);
  CHECK(m.average_precision == doctest::Approx(0.5));
}

TEST_CASE("empty relevance yields zeros") {
  const std::vector<int> pi = identity(10);
  const PrMap m = precision_recall_map(pi, {}, 20);
  CHECK(m.precision == 0.0);
  CHECK(m.recall == 0.0);
  CHECK(m.average_precision == 0.0);
}

TEST_CASE("argument validation") {
  const std::vector<int> pi = identity(5);
  CHECK_THROWS_AS(precision_recall_map(pi, {0}, 0), ValidationError);
  CHECK_THROWS_AS(precision_recall_map(pi, {7}, 3), ValidationError);
  const std::vector<int> bad{0, 0, 1, 2, 3};
  CHECK_THROWS_AS(precision_recall_map(bad, {0}, 3), ValidationError);
}

TEST_CASE("matches the brute-force reference on random instances") {
  Rng rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = 1 + rng.uniform_int(12);
    std::vector<int> pi(t);
    for (int i = 0; i < t; ++i) pi[i] = i;
    for (int i = t; i > 1; --i) std::swap(pi[i - 1], pi[rng.uniform_int(i)]);
    std::set<int> relevant;
    for (int i = 0; i < t; ++i) {
      if (rng.bernoulli(0.35)) relevant.insert(i);
    }
    const int k = 1 + rng.uniform_int(10);
    const PrMap got = precision_recall_map(pi, relevant, k);
    const PrMap want = brute_force_pr_map(pi, relevant, k);
    CHECK(got.precision == want.precision);
    CHECK(got.recall == want.recall);
    CHECK(got.average_precision == want.average_precision);
    CHECK(got.precision * k <= static_cast<double>(relevant.size()) + 1e-12);
    CHECK(got.recall <= 1.0);
    CHECK(got.average_precision >= 0.0);
    CHECK(got.average_precision <= 1.0);
  }
}

TEST_CASE("evaluate_all aggregates and skips pages without relevance") {
  Dataset data = testing::random_dataset(1002, 1, 6);
  // one page, one clicked slot
  for (Slot& s : data.pages[0].slots) s.flags = ActionFlags{};
  data.pages[0].slots[2].flags.clicked = true;

  const XvrTable table = testing::flat_table();
  const RewardMode mode = RewardMode::click_pay();
  const EvalReport report =
      evaluate_all(logged_order_strategy(), data.pages, table, mode,
                   WeightScheme::exp_decay, 20, RelevanceRule::clicked_or_purchased);
  CHECK(report.pages == 1);
  CHECK(report.pages_with_relevant == 1);
  const PrMap direct = precision_recall_map(identity(6), {2}, 20);
  CHECK(report.precision_at_k == doctest::Approx(direct.precision));
  CHECK(report.recall_at_k == doctest::Approx(direct.recall));
  CHECK(report.map_at_k == doctest::Approx(direct.average_precision));

  // a page with no flags leaves the ranking metrics untouched
  Dataset quiet = testing::random_dataset(1003, 1, 6);
  for (Slot& s : quiet.pages[0].slots) s.flags = ActionFlags{};
  data.pages.push_back(quiet.pages[0]);
  const EvalReport report2 =
      evaluate_all(logged_order_strategy(), data.pages, table, mode,
                   WeightScheme::exp_decay, 20, RelevanceRule::clicked_or_purchased);
  CHECK(report2.pages == 2);
  CHECK(report2.pages_with_relevant == 1);
  CHECK(report2.precision_at_k == doctest::Approx(direct.precision));
}

TEST_CASE("identical strategies yield identical reports") {
  const Dataset data = testing::random_dataset(1004, 25, 8);
  const XvrTable table = testing::flat_table();
  const RewardMode mode = RewardMode::click_pay();
  const EvalReport a =
      evaluate_all(logged_order_strategy(), data.pages, table, mode,
                   WeightScheme::exp_decay, 5, RelevanceRule::clicked_or_purchased);
  const EvalReport b =
      evaluate_all(logged_order_strategy(), data.pages, table, mode,
                   WeightScheme::exp_decay, 5, RelevanceRule::clicked_or_purchased);
  CHECK(a.precision_at_k == b.precision_at_k);
  CHECK(a.recall_at_k == b.recall_at_k);
  CHECK(a.map_at_k == b.map_at_k);
  CHECK(a.expected_gmv == b.expected_gmv);
  CHECK(a.mean_offline_reward == b.mean_offline_reward);
}

TEST_CASE("oracle maximizes MAP when relevance is positive reward") {
  const Dataset data = testing::random_dataset(1005, 30, 8);
  const XvrTable table = testing::flat_table();
  const RewardMode mode = RewardMode::click_pay();
  const int k = 5;
  const EvalReport oracle =
      evaluate_all(oracle_strategy(table, mode), data.pages, table, mode,
                   WeightScheme::exp_decay, k, RelevanceRule::positive_reward);
  std::vector<RankStrategy> rivals;
  rivals.push_back(logged_order_strategy());
  rivals.push_back(seeded_random_strategy(9));
  for (const RankStrategy& rival : rivals) {
    const EvalReport r = evaluate_all(rival, data.pages, table, mode,
                                      WeightScheme::exp_decay, k,
                                      RelevanceRule::positive_reward);
    CHECK(oracle.map_at_k >= r.map_at_k - 1e-12);
    CHECK(oracle.mean_offline_reward >= r.mean_offline_reward - 1e-12);
  }
}

TEST_CASE("relevance rules differ as configured") {
  Dataset data = testing::random_dataset(1006, 1, 4);
  for (Slot& s : data.pages[0].slots) s.flags = ActionFlags{};
  data.pages[0].slots[0].flags.clicked = true;
  data.pages[0].slots[1].flags.purchased = true;
  const XvrTable table = testing::flat_table();
  const RewardMode mode = RewardMode::click_pay();
  CHECK(relevant_slots(data.pages[0], RelevanceRule::clicked_or_purchased, table,
                       mode) == std::set<int>{0, 1});
  CHECK(relevant_slots(data.pages[0], RelevanceRule::purchased, table, mode) ==
        std::set<int>{1});
}

}  // TEST_SUITE
