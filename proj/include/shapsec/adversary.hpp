#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "shapsec/dp.hpp"
#include "shapsec/games.hpp"
#include "shapsec/permgen.hpp"

namespace shapsec {

// Never deviates: uniform commitments, always opens.
class PassiveAdversary final : public Adversary {
 public:
  std::string name() const override { return "passive"; }
};

// NaivePerm attack against a single honest player. Susceptible players on one
// side of the honest player in composition order commit powers of the cyclic
// shift r -> r + 1; after the honest opening at most one of them aborts so
// that the composed order puts the honest player at rank 1. Placement is
// guaranteed when the honest player is first or last in composition order.
class CyclicShiftAdversary final : public Adversary {
 public:
  explicit CyclicShiftAdversary(Player target) : target_(target) {}
  std::string name() const override { return "cyclic"; }

  void commit_permutations(const NaiveView& view, Rng& rng,
                           std::vector<std::optional<Perm>>& out) override;
  void open_permutations(const NaiveView& view, std::span<const std::optional<Perm>> committed,
                         std::vector<std::optional<Perm>>& out) override;

 private:
  Player target_;
};

// SeqPerm attack on the lower-bound game. The run is cut into blocks of
// ceil(n / (10 eps)) P-samples. In each of the first C blocks the first time
// the active set is {honest, q in Q, y outside Q} and y is about to be
// eliminated, q aborts. The greedy variant seizes every such opportunity.
class BlockAttackAdversary final : public Adversary {
 public:
  BlockAttackAdversary(std::shared_ptr<const LowerBoundGame> game, std::int64_t budget, double eps,
                       bool greedy = false);
  std::string name() const override { return greedy_ ? "block-greedy" : "block"; }

  std::uint64_t block_length() const { return block_length_; }
  std::int64_t opportunities_seen() const { return seen_; }

  void open_numbers(const ElimView& view, std::span<const std::optional<std::int64_t>> committed,
                    std::vector<std::optional<std::int64_t>>& out) override;

 private:
  std::shared_ptr<const LowerBoundGame> game_;
  std::int64_t budget_;
  std::uint64_t block_length_;
  bool greedy_;
  std::optional<std::uint64_t> last_block_used_;
  std::int64_t seen_ = 0;
};

// SeqPerm attack on the pair game: whenever the partner of the honest player
// is about to be eliminated, the smallest other susceptible player aborts.
class PairAttackAdversary final : public Adversary {
 public:
  PairAttackAdversary(Player honest, Player partner) : honest_(honest), partner_(partner) {}
  std::string name() const override { return "pair"; }

  void open_numbers(const ElimView& view, std::span<const std::optional<std::int64_t>> committed,
                    std::vector<std::optional<std::int64_t>>& out) override;

 private:
  Player honest_;
  Player partner_;
};

// Aborts the lowest-id susceptible player once per P-sample whenever the
// budget allows it.
class RateViolatorAdversary final : public Adversary {
 public:
  std::string name() const override { return "rate"; }

  void begin_sample(const SampleInfo&) override { spent_this_sample_ = false; }
  void open_permutations(const NaiveView& view, std::span<const std::optional<Perm>> committed,
                         std::vector<std::optional<Perm>>& out) override;
  void open_numbers(const ElimView& view, std::span<const std::optional<std::int64_t>> committed,
                    std::vector<std::optional<std::int64_t>>& out) override;

 private:
  bool spent_this_sample_ = false;
};

// Optimal SeqPerm adversary driven by E_worst. With the drawn player i not
// honest, it aborts the cheapest other susceptible player j only if
// E_worst[T][S \ {j}][c-1] is strictly below E_worst[T][S \ {i}][c]. Ties
// between candidates go to the smaller player id.
class DPAdversary final : public Adversary {
 public:
  DPAdversary(std::shared_ptr<const SliceSource> source, std::uint64_t samples);
  std::string name() const override { return "dp"; }

  void open_numbers(const ElimView& view, std::span<const std::optional<std::int64_t>> committed,
                    std::vector<std::optional<std::int64_t>>& out) override;

 private:
  std::shared_ptr<const SliceSource> source_;
  std::uint64_t samples_;
};

}  // namespace shapsec
