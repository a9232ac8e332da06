#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles/oracles.hpp"
#include "shapsec/adversary.hpp"
#include "shapsec/dp.hpp"
#include "shapsec/dp_sim.hpp"
#include "shapsec/games.hpp"
#include "shapsec/runner.hpp"
#include "shapsec/shapley.hpp"

using namespace shapsec;

namespace {

RunOptions opts(Protocol protocol, Player honest, std::uint64_t seed) {
  RunOptions o;
  o.protocol = protocol;
  o.honest = {honest};
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Runner, PassiveRunApproachesShapleyAndIsEfficient) {
  auto game = make_pair_game(3, 0, 1);
  for (Protocol protocol : {Protocol::naive, Protocol::seq}) {
    const auto rec = run_allocation(game, std::make_unique<PassiveAdversary>(), Budget::none(),
                                    StoppingRule::fixed(20000), opts(protocol, 0, 11));
    EXPECT_EQ(rec.samples_used, 20000u);
    EXPECT_EQ(rec.violations, 0);
    EXPECT_NEAR(rec.honest_x(), 1.0, 0.02);
    EXPECT_NEAR(std::accumulate(rec.x.begin(), rec.x.end(), 0.0), 2.0, 1e-9);
    for (const auto& s : rec.per_sample) EXPECT_EQ(s.z, 0.0);
  }
}

TEST(Runner, SameSeedSameRecord) {
  auto game = make_lb_game(6);
  auto run = [&] {
    auto o = opts(Protocol::seq, 0, 99);
    o.record_transcript = true;
    return run_allocation(game, std::make_unique<BlockAttackAdversary>(game, 5, 0.5, true),
                          Budget::known(5), StoppingRule::fixed(300), o);
  };
  const auto a = run(), b = run();
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.orders, b.orders);
  EXPECT_EQ(a.devs, b.devs);
}

TEST(Runner, BlockAttackCostsHalfAlphaPerViolation) {
  auto game = make_lb_game(8);
  const double alpha = game->alpha();
  const auto rec = run_allocation(game, std::make_unique<BlockAttackAdversary>(game, 0, 0.5, true),
                                  Budget::known(1000000), StoppingRule::fixed(20000),
                                  opts(Protocol::seq, 0, 3));
  double z_sum = 0.0, z_violating = 0.0;
  int violating = 0;
  for (const auto& s : rec.per_sample) {
    z_sum += s.z;
    if (s.dev > 0) {
      ++violating;
      z_violating += s.z;
      EXPECT_NEAR(s.y, alpha, 1e-9);
    }
  }
  ASSERT_GT(violating, 1000);
  EXPECT_NEAR(z_violating / violating, alpha / 2.0, 0.25);
  EXPECT_LE(z_sum, rec.violations * alpha + 1e-9);
  EXPECT_EQ(rec.violating_samples, static_cast<std::uint64_t>(violating));
}

TEST(Runner, RewardLossBoundedByViolationsTimesMaxMarginal) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto game = oracle::random_supermodular_game(5, gen);
    const double u_max = shapley_exact(*game).u_max[0];
    for (Protocol protocol : {Protocol::naive, Protocol::seq}) {
      const auto rec =
          run_allocation(game, std::make_unique<RateViolatorAdversary>(), Budget::rate(0.5),
                         StoppingRule::fixed(200), opts(protocol, 0, trial));
      double z_sum = 0.0;
      for (const auto& s : rec.per_sample) z_sum += s.z;
      EXPECT_LE(z_sum, rec.violations * u_max + 1e-9);
      EXPECT_EQ(rec.violations, 100);
    }
  }
}

TEST(Runner, AdaptivePassiveReachesTargetAccuracy) {
  auto game = make_pair_game(3, 0, 1);
  const auto rec = run_adaptive(game, std::make_unique<PassiveAdversary>(), Budget::none(), 0.25,
                                0.1, 2.0, opts(Protocol::naive, 0, 4));
  EXPECT_LE(rec.epsilon_hat, 0.25);
  EXPECT_NEAR(rec.honest_x(), 1.0, 0.1);
  EXPECT_LE(rec.samples_used, *StoppingRule::adaptive(0.25, 0.1, 2.0).natural_bound());
}

TEST(Runner, AdaptiveAlwaysViolatedReportsNothing) {
  auto game = make_pair_game(3, 0, 1);
  const auto rec = run_adaptive(game, std::make_unique<RateViolatorAdversary>(), Budget::rate(1.0),
                                0.25, 0.1, 2.0, opts(Protocol::naive, 0, 4));
  EXPECT_EQ(rec.epsilon_hat, 1.0);
  for (double v : rec.x) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(rec.samples_used, static_cast<std::uint64_t>(std::ceil(adaptive_threshold(1, 0.1, 2.0))));
}

TEST(Runner, CyclicShiftSingleSampleGivesLowestRankReward) {
  // v(S) = |S|^2 + [3 in S]: player 3 earns 2 when ranked first.
  auto game = std::make_shared<FunctionGame>(4, [](const Coalition& s) {
    const double k = s.size();
    return k * k + (s.contains(3) ? 1.0 : 0.0);
  });
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto rec = run_allocation(game, std::make_unique<CyclicShiftAdversary>(3),
                                    Budget::known(1), StoppingRule::fixed(1),
                                    opts(Protocol::naive, 3, seed));
    EXPECT_NEAR(rec.honest_x(), 2.0, 1e-12);
    EXPECT_LE(rec.violations, 1);
  }
}

TEST(Runner, PinningOthersLowNeverHurtsOnSupermodularGames) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    auto game = oracle::random_supermodular_game(n, gen);
    const double phi = shapley_exact(*game).phi[0];
    Coalition pinned;
    for (Player p = 1; p < n; ++p) {
      if (gen() & 1) pinned.insert(p);
    }
    EXPECT_GE(pinned_expectation(*game, 0, pinned), phi - 1e-9);
    EXPECT_NEAR(pinned_expectation(*game, 0, Coalition{}), phi, 1e-9);
  }
}

TEST(Runner, PerpetualPunishmentPinsDetectedPlayers) {
  auto game = make_lb_game(6);
  auto o = opts(Protocol::naive, 0, 21);
  o.punish = Punishment::perpetual;
  o.record_transcript = true;
  const auto rec = run_allocation(game, std::make_unique<RateViolatorAdversary>(),
                                  Budget::known(2), StoppingRule::fixed(50), o);
  ASSERT_EQ(rec.violations, 2);
  std::vector<Player> caught;
  for (std::size_t j = 0; j < rec.orders.size(); ++j) {
    for (std::size_t r = 0; r < caught.size(); ++r) EXPECT_EQ(rec.orders[j][r], caught[r]);
    for (Player d : rec.devs[j]) caught.push_back(d);
  }
  EXPECT_EQ(caught.size(), 2u);
}

TEST(Runner, UnknownBudgetStopsOnceViolationsAreDiluted) {
  auto game = make_pair_game(3, 0, 1);
  const double eps = 0.5, delta = 0.5, gamma = 2.0;
  const std::int64_t budget = 200;
  const auto rule = StoppingRule::unknown_budget(eps, delta, gamma);
  const auto rec = run_allocation(game, std::make_unique<RateViolatorAdversary>(),
                                  Budget::unknown(budget), rule, opts(Protocol::naive, 0, 8));
  const auto min_samples = unknown_budget_min_samples(eps, delta, gamma).used;
  const auto bound = std::max<std::uint64_t>(
      min_samples, static_cast<std::uint64_t>(std::ceil(2.0 * budget * gamma / eps)));
  EXPECT_EQ(rec.violating_samples, 200u);
  EXPECT_LE(rec.samples_used, bound);
  EXPECT_EQ(rec.samples_used, 1600u);
}

TEST(Runner, HardCapRaises) {
  auto game = make_pair_game(3, 0, 1);
  auto o = opts(Protocol::naive, 0, 1);
  o.hard_cap = 100;
  EXPECT_THROW(run_allocation(game, std::make_unique<PassiveAdversary>(), Budget::none(),
                              StoppingRule::unknown_budget(0.5, 0.5, 2.0), o),
               ComputeCapExceeded);
  EXPECT_THROW(run_allocation(game, std::make_unique<RateViolatorAdversary>(), Budget::rate(1.0),
                              StoppingRule::unknown_budget(0.5, 0.5, 2.0), o),
               ComputeCapExceeded);
}

TEST(Runner, ExpectedRewardIsDeterministicAcrossJobCounts) {
  auto game = make_pair_game(4, 0, 1);
  auto one = [&](std::uint64_t m) {
    return run_allocation(game, std::make_unique<PairAttackAdversary>(0, 1), Budget::known(2),
                          StoppingRule::fixed(1), opts(Protocol::seq, 0, derive_seed(5, "run", m)));
  };
  const auto serial = expected_reward_estimate(one, 4000, 1);
  const auto threaded = expected_reward_estimate(one, 4000, 3);
  EXPECT_EQ(serial.values, threaded.values);
  EXPECT_NEAR(serial.mean, 0.5, 4 * serial.std_error);
  EXPECT_GT(serial.std_error, 0.0);
}

TEST(Runner, SummarizeMatchesHandComputation) {
  const auto e = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-12);
}

TEST(DpSim, TwoPassMatchesFullTableRuns) {
  auto game = make_pair_game(4, 0, 1);
  DpSimConfig config;
  config.game = game;
  config.samples = 5;
  config.budget = 2;
  config.runs = 6;
  config.seed = 77;
  config.record_samples = true;
  config.record_transcript = true;
  const auto a = dp_two_pass(config);
  const auto b = dp_full_table(config);
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t m = 0; m < a.runs.size(); ++m) {
    EXPECT_EQ(a.runs[m].x, b.runs[m].x);
    EXPECT_EQ(a.runs[m].orders, b.runs[m].orders);
  }
  EXPECT_NEAR(a.table_value, b.table_value, 1e-12);
  EXPECT_EQ(a.slice_builds, 5u);

  config.runs = 1;
  const auto single = dp_two_pass(config);
  EXPECT_EQ(single.runs[0].x, a.runs[0].x);
}

TEST(DpSim, ZeroBudgetTranscriptEqualsPassive) {
  auto game = make_lb_game(6);
  DpSimConfig config;
  config.game = game;
  config.samples = 20;
  config.budget = 0;
  config.runs = 3;
  config.seed = 12;
  config.record_transcript = true;
  const auto dp = dp_two_pass(config);
  for (std::size_t m = 0; m < 3; ++m) {
    auto o = opts(Protocol::seq, 0, derive_seed(12, "run", m));
    o.record_transcript = true;
    const auto passive = run_allocation(game, std::make_unique<PassiveAdversary>(), Budget::none(),
                                        StoppingRule::fixed(20), o);
    EXPECT_EQ(dp.runs[m].orders, passive.orders);
    EXPECT_EQ(dp.runs[m].x, passive.x);
  }
}

TEST(DpSim, OptimalAttackAtLeastAsStrongAsPairAttack) {
  auto game = make_pair_game(4, 0, 1);
  DpSimConfig config;
  config.game = game;
  config.samples = 1;
  config.budget = 2;
  config.runs = 4000;
  config.seed = 2;
  const auto dp = dp_two_pass(config);
  EXPECT_LE(dp.table_value, 0.5 + 1e-12);
  std::vector<double> xs;
  for (const auto& r : dp.runs) xs.push_back(r.honest_x());
  const auto est = summarize(xs);
  EXPECT_NEAR(est.mean, dp.table_value, 4 * est.std_error);
}

TEST(DpSim, OptimalAdversaryDominatesBuiltInStrategies) {
  auto game = make_lb_game(6);
  const std::uint64_t samples = 2;
  const int budget = 2;
  const std::size_t runs = 100000;
  DpSimConfig config;
  config.game = game;
  config.samples = samples;
  config.budget = budget;
  config.runs = runs;
  config.seed = 31;
  std::vector<double> xs;
  for (const auto& r : dp_two_pass(config).runs) xs.push_back(r.honest_x());
  const auto dp = summarize(xs);

  const std::vector<std::pair<std::string, std::function<std::unique_ptr<Adversary>()>>> rivals = {
      {"passive", [] { return std::make_unique<PassiveAdversary>(); }},
      {"block", [&] { return std::make_unique<BlockAttackAdversary>(game, budget, 0.5, true); }},
      {"pair", [] { return std::make_unique<PairAttackAdversary>(0, 5); }},
      {"rate", [] { return std::make_unique<RateViolatorAdversary>(); }},
  };
  for (const auto& [name, make] : rivals) {
    const auto est = expected_reward_estimate(
        [&](std::uint64_t m) {
          RunOptions o = opts(Protocol::seq, 0, derive_seed(32, "run", m));
          o.record_samples = false;
          return run_allocation(game, make(), Budget::known(budget), StoppingRule::fixed(samples), o);
        },
        runs);
    const double slack = 3 * std::hypot(dp.std_error, est.std_error);
    EXPECT_LE(dp.mean, est.mean + slack) << name << " " << est.mean;
  }
}
