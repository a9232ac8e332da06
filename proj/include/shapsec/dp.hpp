#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "shapsec/game.hpp"

namespace shapsec {

inline constexpr std::size_t kDefaultDpMemoryCap = std::size_t{1} << 30;

// Compressed DP states: the honest player is always present and every other
// class contributes how many of its members are still active. Indices use a
// mixed radix, so removing a player always yields a smaller index.
class StateSpace {
 public:
  // `classes` must partition the non-honest players. When omitted the game's
  // honest_view_classes() are used, falling back to singletons for n <= 20.
  StateSpace(const Game& game, Player honest, std::optional<Partition> classes = std::nullopt,
             std::size_t memory_cap = kDefaultDpMemoryCap);

  Player honest() const { return honest_; }
  int player_count() const { return n_; }
  const Partition& classes() const { return classes_; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  int class_of(Player p) const { return class_of_[p]; }  // -1 for the honest player

  std::size_t state_count() const { return set_size_.size(); }
  std::size_t full_state() const { return state_count() - 1; }

  // Index of the active set; it must contain the honest player.
  std::size_t index_of(std::span<const Player> active) const;

  int remaining(std::size_t state, int cls) const {
    return static_cast<int>(state / stride_[cls] % (classes_[cls].size() + 1));
  }
  std::size_t child(std::size_t state, int cls) const { return state - stride_[cls]; }
  int set_size(std::size_t state) const { return set_size_[state]; }

  // Marginal contribution of the honest player to the inactive players N \ S.
  double honest_gain(std::size_t state) const { return gain_[state]; }

 private:
  Player honest_;
  int n_;
  Partition classes_;
  std::vector<int> class_of_;
  std::vector<std::size_t> stride_;
  std::vector<int> set_size_;
  std::vector<double> gain_;
};

// Fills out[state * (C + 1) + c] = E_worst[T][state][c] from the boundary row
// prev[c] = E_worst[T-1][N][c] (empty span for T = 0).
void fill_slice(const StateSpace& states, std::span<const double> prev, int budget,
                std::vector<double>& out);

// Read access to E_worst slices, one sample index T at a time.
class SliceSource {
 public:
  virtual ~SliceSource() = default;
  virtual const StateSpace& states() const = 0;
  virtual int budget() const = 0;
  virtual std::size_t rows() const = 0;
  virtual std::span<const double> slice(std::size_t t) const = 0;
};

struct HonestReference {
  double phi = 0.0;
  double u_max = 0.0;
};

// Boundary-only table: stores E_worst[T][N][c] for 0 <= T < rows(). Inner
// slices are rebuilt on demand from the previous boundary row.
class DPTable {
 public:
  DPTable(std::shared_ptr<const StateSpace> states, int budget,
          std::optional<HonestReference> reference = std::nullopt,
          std::size_t memory_cap = kDefaultDpMemoryCap);

  // Builds the state space from the game and checks invariants against its
  // exact Shapley value when one is available.
  static DPTable for_game(const Game& game, Player honest, int budget,
                          std::size_t memory_cap = kDefaultDpMemoryCap);

  // Extends the boundary up to `rows` sample indices; returns rows().
  std::size_t extend_to(std::size_t rows);

  std::size_t rows() const { return boundary_.size() / (budget_ + 1); }
  int budget() const { return budget_; }
  double boundary(std::size_t t, int c) const;
  std::size_t boundary_entries() const { return boundary_.size(); }
  const StateSpace& states() const { return *states_; }
  std::shared_ptr<const StateSpace> state_ptr() const { return states_; }

  std::vector<double> build_slice(std::size_t t) const;

 private:
  void check_row(std::size_t t) const;

  std::shared_ptr<const StateSpace> states_;
  int budget_;
  std::optional<HonestReference> reference_;
  std::vector<double> boundary_;
  std::vector<double> scratch_;
};

// Reference implementation keeping every slice in memory.
class FullDPTable final : public SliceSource {
 public:
  FullDPTable(std::shared_ptr<const StateSpace> states, int budget, std::size_t rows,
              std::size_t memory_cap = kDefaultDpMemoryCap);

  const StateSpace& states() const override { return *states_; }
  int budget() const override { return budget_; }
  std::size_t rows() const override { return slices_.size(); }
  std::span<const double> slice(std::size_t t) const override;
  double boundary(std::size_t t, int c) const;

 private:
  std::shared_ptr<const StateSpace> states_;
  int budget_;
  std::vector<std::vector<double>> slices_;
};

// Holds one rebuilt slice at a time over a boundary-only table. With
// auto_prepare, slice(t) rebuilds on a miss (single-threaded use only);
// otherwise callers must prepare(t) before concurrent reads.
class SliceCache final : public SliceSource {
 public:
  SliceCache(std::shared_ptr<const DPTable> table, bool auto_prepare);

  void prepare(std::size_t t);
  const StateSpace& states() const override { return table_->states(); }
  int budget() const override { return table_->budget(); }
  std::size_t rows() const override { return table_->rows(); }
  std::span<const double> slice(std::size_t t) const override;
  std::size_t builds() const { return builds_; }

 private:
  std::shared_ptr<const DPTable> table_;
  bool auto_prepare_;
  mutable std::optional<std::size_t> current_;
  mutable std::vector<double> values_;
  mutable std::size_t builds_ = 0;
};

}  // namespace shapsec
