#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "shapsec/budget.hpp"
#include "shapsec/game.hpp"
#include "shapsec/permgen.hpp"
#include "shapsec/stopping.hpp"

namespace shapsec {

enum class Protocol { naive, seq };

// count_only: violations are only counted. perpetual: detected players keep
// the least preferable ranks, in detection order, for the rest of the run.
enum class Punishment { count_only, perpetual };

// Honest reward in one P-sample: received x_j = y - z, where y is the reward
// along the order that would have come out had nobody deviated.
struct SampleRecord {
  double y = 0.0;
  double z = 0.0;
  std::int64_t dev = 0;
};

struct RunRecord {
  std::vector<double> x;
  double epsilon_hat = 0.0;
  std::vector<SampleRecord> per_sample;
  std::vector<Order> orders;              // only with record_transcript
  std::vector<std::vector<Player>> devs;  // only with record_transcript
  std::uint64_t samples_used = 0;
  std::int64_t violations = 0;
  std::uint64_t violating_samples = 0;
  std::uint64_t seed = 0;
  Player honest = 0;
  std::int64_t budget_used = 0;

  double honest_x() const { return x.at(static_cast<std::size_t>(honest)); }
};

struct RunOptions {
  Protocol protocol = Protocol::naive;
  Punishment punish = Punishment::count_only;
  std::vector<Player> honest{0};  // first entry is the reported honest player
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> hard_cap;
  bool record_samples = true;
  bool record_transcript = false;
};

// Thrown when a run would exceed its sample cap before the stopping rule fires.
class ComputeCapExceeded : public std::runtime_error {
 public:
  ComputeCapExceeded(std::uint64_t cap, const std::string& detail)
      : std::runtime_error("sample cap of " + std::to_string(cap) + " reached: " + detail),
        cap_(cap) {}
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

inline constexpr std::uint64_t kDefaultHardCap = 100'000'000;

// One execution of the allocation loop, advanced one P-sample at a time.
// Randomness: honest player p draws from substream(seed, "honest", p), the
// adversary from substream(seed, "adversary") and counterfactual fills from
// substream(seed, "counterfactual").
class AllocationRun {
 public:
  AllocationRun(GamePtr game, std::unique_ptr<Adversary> adversary, Budget budget,
                StoppingRule stopping, RunOptions options);

  bool finished() const { return stopping_.done(); }
  void step();
  RunRecord take_record();

  const StoppingRule& stopping() const { return stopping_; }
  const Budget& budget() const { return budget_; }
  std::uint64_t cap() const { return cap_; }

 private:
  GamePtr game_;
  std::unique_ptr<Adversary> adversary_;
  Budget budget_;
  StoppingRule stopping_;
  RunOptions options_;
  std::uint64_t cap_;

  std::vector<Rng> honest_rngs_;
  std::vector<HonestParty> honest_;
  Rng adversary_rng_;
  Rng counterfactual_rng_;

  std::vector<Player> pinned_;
  std::vector<char> is_pinned_;
  std::vector<double> z_;
  std::vector<double> snapshot_;
  std::vector<double> marginals_;
  RunRecord record_;
};

RunRecord run_allocation(GamePtr game, std::unique_ptr<Adversary> adversary, Budget budget,
                         StoppingRule stopping, RunOptions options);

// Adaptive loop over NaivePerm; x is the last snapshot and epsilon_hat = 2^-k.
RunRecord run_adaptive(GamePtr game, std::unique_ptr<Adversary> adversary, Budget budget,
                       double eps, double delta, double gamma, RunOptions options);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> values;
};

// Runs fn(0..count-1) over `jobs` worker threads; rethrows the first failure.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

// Mean and standard error of the honest allocation over `repetitions` runs.
// run_one(m) must build an independent run, e.g. seeded by derive_seed(seed, "run", m).
Estimate expected_reward_estimate(const std::function<RunRecord(std::uint64_t)>& run_one,
                                  std::size_t repetitions, std::size_t jobs = 1);

Estimate summarize(std::vector<double> values);

// Expected honest marginal when the `pinned` players always take the lowest
// ranks and the rest are uniformly ordered; n <= 20.
double pinned_expectation(const Game& game, Player honest, const Coalition& pinned);

}  // namespace shapsec
