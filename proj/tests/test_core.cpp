#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ugc/core.hpp"
#include "ugc/numerics.hpp"

using namespace ugc;

namespace {

// Independent recomputation with split reward/cost arithmetic in long double.
long double oracle_prop_reward(int i, const std::vector<double>& x, double reward) {
  if (x[i] <= 0.0) return 0.0L;
  long double sum = 0.0L;
  for (double v : x) sum += v;
  return static_cast<long double>(reward) * x[i] / sum;
}

long double oracle_cost(int i, const std::vector<double>& x, const std::vector<double>& q,
                        double c) {
  return static_cast<long double>(c) * x[i] / q[i];
}

// Expected top-K reward of user i under uniformly random tie-breaking,
// averaged by enumerating which tied users take the contested slots.
double oracle_topk_expected_reward(int i, const std::vector<double>& x, double reward, int k) {
  if (x[i] <= 0.0) return 0.0;
  int above = 0, tied = 0;
  for (double v : x) {
    if (v > x[i]) ++above;
    else if (v == x[i]) ++tied;
  }
  if (above >= k) return 0.0;
  const int slots = std::min(k - above, tied);
  // i is selected in C(tied-1, slots-1) of the C(tied, slots) equally likely draws
  const double p_selected =
      num::choose(tied - 1, slots - 1) / num::choose(tied, slots);
  return p_selected * reward / k;
}

GameConfig m2_cfg(int n, int k, double reward, double c, std::vector<double> q) {
  return GameConfig::make(Mechanism::M2, n, reward, c, std::move(q), k);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(GameConfig::make(Mechanism::M3, 2, 1.0, 1.0, {0.5, 0.0}), ConfigError);
  CHECK_THROWS_AS(GameConfig::make(Mechanism::M3, 2, 1.0, 1.0, {0.5, 0.8}), ConfigError);
  CHECK_THROWS_AS(GameConfig::make(Mechanism::M3, 2, 1.0, 1.0, {1.2, 0.8}), ConfigError);
  CHECK_THROWS_AS(GameConfig::make(Mechanism::M3, 3, 1.0, 1.0, {0.5, 0.4}), ConfigError);
  CHECK_THROWS_AS(GameConfig::make(Mechanism::M1, 2, 1.0, 1.0, {0.5, 0.4}, 0), ConfigError);
  CHECK_THROWS_AS(GameConfig::make(Mechanism::M3, 2, -1.0, 1.0, {0.5, 0.4}), ConfigError);
  CHECK_THROWS_AS(GameConfig::make(Mechanism::M5, 2, 3.0, 1.0, {0.5, 0.4}, 1), ConfigError);
  CHECK_NOTHROW(GameConfig::make(Mechanism::M1, 2, 1.0, 1.0, {0.5, 0.4}, 2));
}

TEST_CASE("proportional utility: symmetric two-user example") {
  const auto cfg = GameConfig::make(Mechanism::M4, 2, 2.0, 1.0, {1.0, 1.0});
  const ActionProfile p{{0.5, 0.5}};
  const double reward = static_cast<double>(oracle_prop_reward(0, p.actions, cfg.reward));
  const double cost = static_cast<double>(oracle_cost(0, p.actions, cfg.types, cfg.cost_bound));
  CHECK(reward == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cost == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(utility_proportional(0, p, cfg) == doctest::Approx(reward - cost).epsilon(1e-15));
  CHECK(utility_proportional(0, p, cfg) == doctest::Approx(0.5));
}

TEST_CASE("proportional utility: all-zero profile gives zero") {
  const auto cfg = GameConfig::make(Mechanism::M4, 3, 5.0, 2.0, {1.0, 0.7, 0.2});
  const ActionProfile p{{0.0, 0.0, 0.0}};
  for (int i = 0; i < 3; ++i) CHECK(utility_proportional(i, p, cfg) == 0.0);
}

TEST_CASE("proportional utility: three-user binary profile") {
  const auto cfg = GameConfig::make(Mechanism::M3, 3, 4.0, 1.0, {0.9247, 0.3421, 0.3095});
  const ActionProfile p{{0.9247, 0.3421, 0.0}};
  CHECK(utility_proportional(2, p, cfg) == 0.0);
  const double expected = 4.0 * 0.3421 / (0.9247 + 0.3421) - 1.0;
  CHECK(utility_proportional(1, p, cfg) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(utility_proportional(1, p, cfg) == doctest::Approx(0.0802).epsilon(1e-3));
}

TEST_CASE("top-K utility: clear ranks") {
  const auto cfg = m2_cfg(3, 2, 3.0, 1.0, {0.9, 0.8, 0.7});
  const ActionProfile p{{0.9, 0.8, 0.0}};
  CHECK(utility_topk(0, p, cfg) == doctest::Approx(0.5));
  CHECK(utility_topk(1, p, cfg) == doctest::Approx(1.5 - 1.0));
  CHECK(utility_topk(2, p, cfg) == 0.0);
}

TEST_CASE("top-K utility: all-zero profile gives zero") {
  const auto cfg = m2_cfg(3, 2, 3.0, 1.0, {0.9, 0.8, 0.7});
  const ActionProfile p{{0.0, 0.0, 0.0}};
  for (int i = 0; i < 3; ++i) CHECK(utility_topk(i, p, cfg) == 0.0);
}

TEST_CASE("top-K utility: tie at the boundary splits the reward") {
  const auto cfg = m2_cfg(3, 1, 2.0, 1.0, {1.0, 1.0, 1.0});
  const ActionProfile p{{0.5, 0.5, 0.0}};
  for (int i : {0, 1}) {
    const double expected_reward = oracle_topk_expected_reward(i, p.actions, cfg.reward, cfg.top_k);
    CHECK(expected_reward == doctest::Approx(1.0));
    CHECK(utility_topk(i, p, cfg) ==
          doctest::Approx(expected_reward - 0.5 * cfg.cost_bound / cfg.types[i]));
  }
  CHECK(utility_topk(2, p, cfg) == 0.0);
}

TEST_CASE("top-K utility: random tie configurations match the tie-break oracle") {
  num::Rng rng(321);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.uniform_int(0, 4);
    const int k = 1 + rng.uniform_int(0, n - 1);
    std::vector<double> q(n, 1.0);
    std::vector<double> x(n);
    // few distinct levels so ties are frequent
    for (double& v : x) v = rng.uniform_int(0, 3) / 4.0;
    const auto cfg = m2_cfg(n, k, 2.5, 1.0, q);
    const ActionProfile p{x};
    for (int i = 0; i < n; ++i) {
      const double reward = oracle_topk_expected_reward(i, x, cfg.reward, k);
      const double cost = x[i] > 0.0 ? cfg.cost_bound * x[i] / q[i] : 0.0;
      CHECK(utility_topk(i, p, cfg) == doctest::Approx(reward - cost).epsilon(1e-12));
    }
  }
}

TEST_CASE("total quality") {
  CHECK(total_quality(ActionProfile{{0.0, 0.0}}) == 0.0);
  CHECK(total_quality(ActionProfile{{0.5, 0.5}}) == doctest::Approx(1.0));
  CHECK(total_quality(ActionProfile{{0.9247, 0.3421, 0.0}}) == doctest::Approx(1.2668));
}

TEST_CASE("validate_profile") {
  const auto cont = GameConfig::make(Mechanism::M4, 1, 1.0, 1.0, {1.0});
  const auto bad = validate_profile(ActionProfile{{1.1}}, cont);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.violating_users.size() == 1);
  CHECK(bad.violating_users[0] == 1);

  const auto bin = GameConfig::make(Mechanism::M3, 1, 2.0, 1.0, {1.0});
  CHECK_FALSE(validate_profile(ActionProfile{{0.5}}, bin).ok);
  CHECK(validate_profile(ActionProfile{{1.0}}, bin).ok);

  const auto paper = GameConfig::make(Mechanism::M3, 3, 4.0, 1.0, {0.9247, 0.3421, 0.3095});
  CHECK(validate_profile(ActionProfile{{0.9247, 0.3421, 0.0}}, paper).ok);
  CHECK_FALSE(validate_profile(ActionProfile{{0.9247, 0.3421}}, paper).ok);
}

TEST_CASE("property: proportional rewards are budget balanced") {
  num::Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + rng.uniform_int(0, 5);
    std::vector<double> q(n), x(n);
    for (int i = 0; i < n; ++i) q[i] = rng.uniform(0.05, 1.0);
    std::sort(q.begin(), q.end(), std::greater<>());
    bool any = false;
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform01() < 0.3 ? 0.0 : rng.uniform(0.0, q[i]);
      any = any || x[i] > 0.0;
    }
    if (!any) x[0] = q[0] * 0.5;
    const double reward = rng.uniform(0.5, 10.0);
    const auto cfg = GameConfig::make(Mechanism::M4, n, reward, 1.0, q);
    const ActionProfile p{x};
    double paid = 0.0;
    for (int i = 0; i < n; ++i)
      paid += utility_proportional(i, p, cfg) + (x[i] > 0.0 ? cfg.cost_bound * x[i] / q[i] : 0.0);
    CHECK(paid == doctest::Approx(reward).epsilon(1e-12));
  }
}

TEST_CASE("property: top-K rewards never exceed the budget, exhaust it with K participants") {
  num::Rng rng(100);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + rng.uniform_int(0, 5);
    const int k = 1 + rng.uniform_int(0, n - 1);
    std::vector<double> q(n), x(n);
    for (int i = 0; i < n; ++i) q[i] = rng.uniform(0.05, 1.0);
    std::sort(q.begin(), q.end(), std::greater<>());
    int participants = 0;
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform01() < 0.4 ? 0.0 : rng.uniform_int(1, 4) * q[i] / 4.0;
      participants += x[i] > 0.0;
    }
    const double reward = rng.uniform(0.5, 10.0);
    const auto cfg = m2_cfg(n, k, reward, 1.0, q);
    const ActionProfile p{x};
    double paid = 0.0;
    for (int i = 0; i < n; ++i)
      paid += utility_topk(i, p, cfg) + (x[i] > 0.0 ? cfg.cost_bound * x[i] / q[i] : 0.0);
    CHECK(paid <= reward + 1e-12);
    if (participants >= k) CHECK(paid == doctest::Approx(reward).epsilon(1e-12));
    else CHECK(paid == doctest::Approx(participants * reward / k).epsilon(1e-12));
  }
}

TEST_CASE("property: permuting users permutes utilities (anonymity)") {
  num::Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.uniform_int(0, 3);
    std::vector<double> q(n), x(n);
    for (int i = 0; i < n; ++i) q[i] = rng.uniform(0.05, 1.0);
    std::sort(q.begin(), q.end(), std::greater<>());
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(0.0, q[i]);

    // reversal is only a valid reordering when the reversed types stay sorted,
    // so use equal types and permute actions instead
    std::fill(q.begin(), q.end(), 0.75);
    const auto topk = m2_cfg(n, 1 + rng.uniform_int(0, n - 1), 3.0, 1.0, q);
    const auto prop = GameConfig::make(Mechanism::M4, n, 3.0, 1.0, q);
    std::vector<double> xr(x.rbegin(), x.rend());
    const ActionProfile p{x}, pr{xr};
    for (int i = 0; i < n; ++i) {
      CHECK(utility_topk(i, p, topk) == doctest::Approx(utility_topk(n - 1 - i, pr, topk)));
      CHECK(utility_proportional(i, p, prop) ==
            doctest::Approx(utility_proportional(n - 1 - i, pr, prop)));
    }
  }
}
