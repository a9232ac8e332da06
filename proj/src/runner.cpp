#include "shapsec/runner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "shapsec/shapley.hpp"

namespace shapsec {

AllocationRun::AllocationRun(GamePtr game, std::unique_ptr<Adversary> adversary, Budget budget,
                             StoppingRule stopping, RunOptions options)
    : game_(std::move(game)),
      adversary_(std::move(adversary)),
      budget_(budget),
      stopping_(stopping),
      options_(std::move(options)),
      adversary_rng_(substream(options_.seed, "adversary")),
      counterfactual_rng_(substream(options_.seed, "counterfactual")) {
  if (!game_) throw std::invalid_argument("run needs a game");
  if (!adversary_) throw std::invalid_argument("run needs an adversary");
  const int n = game_->size();
  if (options_.honest.empty()) throw std::invalid_argument("run needs an honest player");
  auto sorted = options_.honest;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("honest players repeat");
  }
  for (Player p : sorted) {
    if (p < 0 || p >= n) throw std::out_of_range("honest player out of range");
  }
  if (options_.protocol == Protocol::seq && sorted.size() > 1) {
    throw std::invalid_argument("SeqPerm supports a single honest player");
  }
  honest_rngs_.reserve(sorted.size());
  for (Player p : sorted) honest_rngs_.push_back(substream(options_.seed, "honest", p));
  for (std::size_t k = 0; k < sorted.size(); ++k) honest_.push_back({sorted[k], &honest_rngs_[k]});

  cap_ = options_.hard_cap.value_or(stopping_.natural_bound().value_or(kDefaultHardCap));
  is_pinned_.assign(n, 0);
  z_.assign(n, 0.0);
  snapshot_.assign(n, 0.0);
  marginals_.assign(n, 0.0);
  record_.seed = options_.seed;
  record_.honest = options_.honest.front();
}

void AllocationRun::step() {
  if (finished()) throw std::logic_error("step() on a finished run");
  const std::uint64_t j = stopping_.samples();
  if (j >= cap_) {
    throw ComputeCapExceeded(cap_, stopping_.describe() + " has not fired after " +
                                       std::to_string(j) + " P-samples (" +
                                       std::to_string(stopping_.violating_samples()) +
                                       " with violations)");
  }
  const int n = game_->size();
  std::vector<Player> active;
  active.reserve(n);
  for (Player p = 0; p < n; ++p) {
    if (!is_pinned_[p]) active.push_back(p);
  }

  ProtocolEnv env{honest_, *adversary_, adversary_rng_, budget_, j, &counterfactual_rng_};
  PSampleOutcome out = options_.protocol == Protocol::naive ? naive_perm(active, env)
                                                            : seq_perm(active, env);

  Order order(pinned_);
  order.reserve(n);
  if (options_.punish == Punishment::perpetual && options_.protocol == Protocol::naive) {
    order.insert(order.end(), out.dev.begin(), out.dev.end());
    for (Player p : out.sigma) {
      if (!std::binary_search(out.dev.begin(), out.dev.end(), p)) order.push_back(p);
    }
  } else {
    order.insert(order.end(), out.sigma.begin(), out.sigma.end());
  }

  game_->marginals_along(order, marginals_);
  const Player honest = record_.honest;
  double x = 0.0;
  for (int r = 0; r < n; ++r) {
    z_[order[r]] += marginals_[r];
    if (order[r] == honest) x = marginals_[r];
  }

  double y = x;
  if (!out.dev.empty() && !out.counterfactual.empty()) {
    Order cf(pinned_);
    cf.insert(cf.end(), out.counterfactual.begin(), out.counterfactual.end());
    std::vector<double> cf_marginals(n);
    game_->marginals_along(cf, cf_marginals);
    y = cf_marginals[std::find(cf.begin(), cf.end(), honest) - cf.begin()];
  }
  if (options_.record_samples) {
    record_.per_sample.push_back({y, y - x, static_cast<std::int64_t>(out.dev.size())});
  }
  if (options_.record_transcript) {
    record_.orders.push_back(order);
    record_.devs.push_back(out.dev);
  }

  if (options_.punish == Punishment::perpetual) {
    for (Player d : out.dev) {
      if (!is_pinned_[d]) {
        is_pinned_[d] = 1;
        pinned_.push_back(d);
      }
    }
  }

  const auto action = stopping_.observe(static_cast<std::int64_t>(out.dev.size()));
  if (action == StoppingRule::Action::snapshot) {
    const double r = static_cast<double>(stopping_.samples());
    for (int p = 0; p < n; ++p) snapshot_[p] = z_[p] / r;
  }
}

RunRecord AllocationRun::take_record() {
  const double r = static_cast<double>(stopping_.samples());
  if (stopping_.kind() == StoppingRule::Kind::adaptive) {
    record_.x = snapshot_;
  } else {
    record_.x.resize(z_.size());
    for (std::size_t p = 0; p < z_.size(); ++p) record_.x[p] = r > 0 ? z_[p] / r : 0.0;
  }
  record_.epsilon_hat = stopping_.epsilon_hat();
  record_.samples_used = stopping_.samples();
  record_.violations = stopping_.violations();
  record_.violating_samples = stopping_.violating_samples();
  record_.budget_used = budget_.used();
  return std::move(record_);
}

RunRecord run_allocation(GamePtr game, std::unique_ptr<Adversary> adversary, Budget budget,
                         StoppingRule stopping, RunOptions options) {
  AllocationRun run(std::move(game), std::move(adversary), budget, stopping, std::move(options));
  while (!run.finished()) run.step();
  return run.take_record();
}

RunRecord run_adaptive(GamePtr game, std::unique_ptr<Adversary> adversary, Budget budget,
                       double eps, double delta, double gamma, RunOptions options) {
  options.protocol = Protocol::naive;
  return run_allocation(std::move(game), std::move(adversary), budget,
                        StoppingRule::adaptive(eps, delta, gamma), std::move(options));
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Estimate summarize(std::vector<double> values) {
  Estimate e;
  const double m = static_cast<double>(values.size());
  if (values.empty()) return e;
  e.mean = std::accumulate(values.begin(), values.end(), 0.0) / m;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (m - 1.0) / m);
  }
  e.values = std::move(values);
  return e;
}

Estimate expected_reward_estimate(const std::function<RunRecord(std::uint64_t)>& run_one,
                                  std::size_t repetitions, std::size_t jobs) {
  std::vector<double> values(repetitions);
  parallel_for(repetitions, jobs, [&](std::size_t m) { values[m] = run_one(m).honest_x(); });
  return summarize(std::move(values));
}

double pinned_expectation(const Game& game, Player honest, const Coalition& pinned) {
  const int n = game.size();
  if (n > kMaxExactPlayers) throw std::length_error("pinned expectation supports n <= 20");
  if (honest < 0 || honest >= n) throw std::out_of_range("honest player out of range");
  if (pinned.contains(honest)) throw std::invalid_argument("the honest player cannot be pinned");
  std::vector<Player> free;
  for (Player p = 0; p < n; ++p) {
    if (p != honest && !pinned.contains(p)) free.push_back(p);
  }
  const int m = static_cast<int>(free.size());
  // weight[s] = s! (m - s)! / (m + 1)!
  std::vector<double> weight(m + 1);
  for (int s = 0; s <= m; ++s) {
    double w = 1.0 / (m + 1);
    for (int i = 1; i <= s; ++i) w *= static_cast<double>(i) / (m - s + i);
    weight[s] = w;
  }
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Coalition s = pinned;
    for (int k = 0; k < m; ++k) {
      if (mask >> k & 1U) s.insert(free[k]);
    }
    total += weight[std::popcount(mask)] * (game.value(s.with(honest)) - game.value(s));
  }
  return total;
}

}  // namespace shapsec
