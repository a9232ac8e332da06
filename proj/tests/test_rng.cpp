#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "shapsec/budget.hpp"
#include "shapsec/rng.hpp"
#include "shapsec/stopping.hpp"

using namespace shapsec;

// Reference values produced by an independent re-implementation of the
// generator, the seed derivation and the bounded draw.
TEST(Rng, CoreGeneratorMatchesStandardCheckValue) {
  Rng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.next();
  EXPECT_EQ(rng.next(), 9981545732273789042ULL);
}

TEST(Rng, SeedDerivationVectors) {
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(fnv1a64("honest"), 0x726bacc28784af92ULL);
  EXPECT_EQ(derive_seed(0, "honest", 0), 13636805674916377783ULL);
  EXPECT_EQ(derive_seed(42, "honest", 3), 15634690829359025642ULL);
  EXPECT_EQ(derive_seed(42, "adversary"), 2463629669893744215ULL);
  EXPECT_EQ(derive_seed(7, "run", 999), 14590069865645594774ULL);

  Rng honest = substream(42, "honest", 0);
  EXPECT_EQ(honest.next(), 4876940386636188441ULL);
  EXPECT_EQ(honest.next(), 4158404176434366416ULL);
  EXPECT_EQ(honest.next(), 4866395719395431206ULL);
}

TEST(Rng, BoundedDrawsShuffleAndUnit) {
  Rng adv = substream(42, "adversary");
  const std::vector<std::uint64_t> bounds{1, 2, 3, 6, 10, 1000, (1ULL << 63) + 5};
  const std::vector<std::uint64_t> expect{0, 1, 2, 1, 4, 884, 2095046141520224666ULL};
  for (std::size_t k = 0; k < bounds.size(); ++k) EXPECT_EQ(adv.below(bounds[k]), expect[k]);
  EXPECT_THROW(adv.below(0), std::invalid_argument);

  Rng rng(123);
  std::vector<int> items(8);
  std::iota(items.begin(), items.end(), 0);
  rng.shuffle(std::span<int>(items));
  EXPECT_EQ(items, (std::vector<int>{7, 1, 4, 0, 6, 5, 3, 2}));
  EXPECT_DOUBLE_EQ(Rng(123).unit(), 0.3132001786784707);
}

TEST(Rng, DistinctLabelsGiveDistinctStreams) {
  EXPECT_NE(derive_seed(1, "honest", 0), derive_seed(1, "adversary", 0));
  EXPECT_NE(derive_seed(1, "honest", 0), derive_seed(1, "honest", 1));
  EXPECT_NE(derive_seed(1, "honest", 0), derive_seed(2, "honest", 0));
}

TEST(Budget, KnownCapIsEnforced) {
  Budget b = Budget::known(2);
  EXPECT_EQ(b.remaining(0), 2);
  b.spend(1, 0);
  b.spend(1, 5);
  EXPECT_EQ(b.remaining(9), 0);
  EXPECT_THROW(b.spend(1, 9), std::logic_error);
  EXPECT_EQ(b.used(), 2);
  EXPECT_THROW(Budget::known(-1), std::invalid_argument);
}

TEST(Budget, RateAllowsFloorOfPrefix) {
  Budget b = Budget::rate(0.1);
  for (std::uint64_t t = 0; t < 9; ++t) EXPECT_EQ(b.remaining(t), 0) << t;
  EXPECT_EQ(b.remaining(9), 1);
  b.spend(1, 9);
  EXPECT_EQ(b.remaining(18), 0);
  EXPECT_EQ(b.remaining(19), 1);
  EXPECT_THROW(b.spend(2, 19), std::logic_error);
  EXPECT_THROW(Budget::rate(1.5), std::invalid_argument);
  // Prefix soundness: greedy spending never exceeds f T.
  Budget g = Budget::rate(0.37);
  for (std::uint64_t t = 0; t < 1000; ++t) {
    g.spend(g.remaining(t), t);
    EXPECT_LE(static_cast<double>(g.used()), 0.37 * static_cast<double>(t + 1) + 1e-9);
  }
}

TEST(StoppingFormulas, KnownBudgetSampleCounts) {
  const auto big = known_budget_samples(0.05, 0.082, 200, 100.0);
  EXPECT_EQ(big.budget.used, 800000u);
  EXPECT_EQ(big.chernoff.used, 800332u);
  EXPECT_EQ(big.samples, 800332u);
  const auto dblp = known_budget_samples(0.1, 0.082, 100, 3.15789);
  EXPECT_EQ(dblp.budget.used, 6316u);
  EXPECT_EQ(dblp.chernoff.used, 6319u);
  EXPECT_EQ(dblp.samples, 6319u);
  EXPECT_NEAR(dblp.chernoff.real, 8 * 3.15789 / 0.01 * std::log(1 / 0.082), 1e-9);
  EXPECT_EQ(StoppingRule::known_budget(0.1, 0.082, 100, 3.15789).planned_samples(), 6319u);
}

TEST(StoppingFormulas, UnknownBudgetMinimum) {
  const auto r0 = unknown_budget_min_samples(0.2, 0.1, 4.0);
  const double real = 8 * 4.0 / 0.04 * (std::log(16 * 4.0 / 0.04) + std::log(10.0));
  EXPECT_NEAR(r0.real, real, 1e-9);
  EXPECT_EQ(r0.used, static_cast<std::uint64_t>(std::ceil(real)));
}

TEST(StoppingRule, UnknownBudgetWaitsForMinimumAndLowViolationShare) {
  auto rule = StoppingRule::unknown_budget(0.5, 0.5, 1.0);
  const std::uint64_t r0 = unknown_budget_min_samples(0.5, 0.5, 1.0).used;
  // Violations in the first 30% of samples keep the share above eps / (2 Gamma) = 0.25.
  std::uint64_t t = 0;
  while (!rule.done()) {
    const bool violate = t < (r0 * 3) / 10 + 1;
    rule.observe(violate ? 1 : 0);
    ++t;
  }
  EXPECT_GE(rule.samples(), r0);
  EXPECT_LE(static_cast<double>(rule.violating_samples()) / rule.samples(), 0.25);
  EXPECT_EQ(rule.samples(), std::max<std::uint64_t>(r0, 4 * rule.violating_samples()));
}

TEST(StoppingRule, AdaptiveFollowsThresholds) {
  const double gamma = 2.0, delta = 0.1, eps = 0.25;
  auto rule = StoppingRule::adaptive(eps, delta, gamma);
  std::vector<std::uint64_t> snapshots;
  while (!rule.done()) {
    if (rule.observe(0) == StoppingRule::Action::snapshot) snapshots.push_back(rule.samples());
  }
  ASSERT_EQ(snapshots.size(), 2u);
  EXPECT_EQ(snapshots[0], static_cast<std::uint64_t>(std::ceil(adaptive_threshold(1, delta, gamma))));
  EXPECT_EQ(snapshots[1], static_cast<std::uint64_t>(std::ceil(adaptive_threshold(2, delta, gamma))));
  EXPECT_DOUBLE_EQ(rule.epsilon_hat(), 0.25);
  EXPECT_EQ(rule.natural_bound(), snapshots[1]);

  auto broken = StoppingRule::adaptive(eps, delta, gamma);
  while (!broken.done()) broken.observe(1);
  EXPECT_EQ(broken.level(), 0);
  EXPECT_DOUBLE_EQ(broken.epsilon_hat(), 1.0);
}
