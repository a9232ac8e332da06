#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shapsec/budget.hpp"
#include "shapsec/coalition.hpp"
#include "shapsec/rng.hpp"

namespace shapsec {

// A permutation of the active list: perm[r] is an index into that list.
using Perm = std::vector<int>;

enum class Phase { commit, open };

struct PSampleOutcome {
  Order sigma;                    // rank 1 first
  std::vector<Player> dev;        // sorted ascending
  std::int64_t violations_used = 0;
  Order counterfactual;           // order had every player opened as committed; may be empty
};

struct SampleInfo {
  std::uint64_t sample_index = 0;
  std::span<const Player> active;
  std::span<const Player> honest;
};

// What the adversary may see while NaivePerm runs. At commit time the honest
// permutations are withheld; at open time they are revealed first (rushing).
struct NaiveView {
  Phase phase = Phase::commit;
  std::uint64_t sample_index = 0;
  std::span<const Player> active;
  std::span<const Player> honest;
  std::span<const Player> susceptible;
  std::span<const Perm> honest_opened;  // empty during commit
  std::int64_t budget_remaining = 0;
};

struct RevealedNumber {
  int round = 0;
  Player player = 0;
  std::int64_t value = 0;
};

// What the adversary may see during one RandElim round.
struct ElimView {
  Phase phase = Phase::commit;
  std::uint64_t sample_index = 0;
  int round = 0;
  std::span<const Player> active;       // S, sorted
  std::span<const Player> honest;       // honest players in S
  std::span<const Player> susceptible;  // the rest of S
  std::span<const Player> ranked;       // ranks already fixed in this P-sample
  std::span<const RevealedNumber> honest_revealed;  // current round only once open
  std::optional<Player> outcome_if_all_open;        // open phase only
  std::int64_t budget_remaining = 0;
};

// Rushing adversary controlling every non-honest player. Output vectors are
// pre-sized to the susceptible list; entry k belongs to susceptible[k], and
// std::nullopt means that player aborts. Openings that differ from the
// commitment are rejected and recorded as violations.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;

  virtual void begin_sample(const SampleInfo&) {}
  virtual void end_sample(const PSampleOutcome&) {}

  virtual void commit_permutations(const NaiveView& view, Rng& rng,
                                   std::vector<std::optional<Perm>>& out);
  // `out` arrives filled with the commitments.
  virtual void open_permutations(const NaiveView& view,
                                 std::span<const std::optional<Perm>> committed,
                                 std::vector<std::optional<Perm>>& out);

  virtual void commit_numbers(const ElimView& view, Rng& rng,
                              std::vector<std::optional<std::int64_t>>& out);
  // `out` arrives filled with the commitments.
  virtual void open_numbers(const ElimView& view,
                            std::span<const std::optional<std::int64_t>> committed,
                            std::vector<std::optional<std::int64_t>>& out);
};

struct HonestParty {
  Player id = 0;
  Rng* rng = nullptr;
};

struct ProtocolEnv {
  std::span<const HonestParty> honest;  // sorted by id
  Adversary& adversary;
  Rng& adversary_rng;
  Budget& budget;
  std::uint64_t sample_index = 0;
  Rng* counterfactual_rng = nullptr;  // null: no counterfactual order
};

struct ElimOutcome {
  Player eliminated = 0;
  std::vector<Player> dev;  // sorted ascending
  std::int64_t violations_used = 0;
  Player counterfactual = 0;  // eliminated player had every player opened as committed
};

// Composes every valid opened permutation in ascending player-id order,
// left to right. Violators stay where the composition puts them.
PSampleOutcome naive_perm(std::span<const Player> players, ProtocolEnv& env);

// One commit-open round over the sorted active set S; k = |S|.
ElimOutcome rand_elim(std::span<const Player> active, ProtocolEnv& env, int round = 0,
                      std::span<const Player> ranked = {},
                      std::vector<RevealedNumber>* history = nullptr);

// Fills ranks from the least preferable upward with repeated RandElim rounds.
PSampleOutcome seq_perm(std::span<const Player> players, ProtocolEnv& env);

bool is_valid_perm(std::span<const int> perm, std::size_t m);

}  // namespace shapsec
