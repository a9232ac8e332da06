#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shapsec/coalition.hpp"

namespace shapsec {

// Analytically known Shapley vector and per-player maximum marginal contribution.
struct ClosedForm {
  std::vector<double> phi;
  std::vector<double> u_max;
};

// A coalitional game over players 0..n-1 with a non-negative utility oracle.
//
// Instances are immutable after construction; value() and marginals_along()
// may be called concurrently.
class Game {
 public:
  explicit Game(int n);
  virtual ~Game() = default;

  int size() const { return n_; }

  virtual double value(const Coalition& s) const = 0;

  // out[r] = v(order[0..r]) - v(order[0..r-1]).
  virtual void marginals_along(std::span<const Player> order, std::span<double> out) const;

  virtual std::optional<ClosedForm> closed_form() const { return std::nullopt; }

  // Declared classes of players exchangeable under v. Verified, never inferred.
  virtual std::optional<Partition> symmetry_classes() const { return std::nullopt; }

  // Classes of the other players under which the honest player's marginal
  // contributions are invariant. Defaults to symmetry_classes() minus `honest`.
  virtual std::optional<Partition> honest_view_classes(Player honest) const;

  virtual std::string describe() const { return "game(n=" + std::to_string(n_) + ")"; }

 protected:
  void check_player(Player p) const;

 private:
  int n_;
};

using GamePtr = std::shared_ptr<const Game>;

// Game backed by an explicit 2^n table indexed by coalition mask; n <= 20.
class TabularGame final : public Game {
 public:
  TabularGame(int n, std::vector<double> table, std::optional<Partition> classes = std::nullopt);

  double value(const Coalition& s) const override;
  std::optional<Partition> symmetry_classes() const override { return classes_; }
  std::string describe() const override;

  std::span<const double> table() const { return table_; }

 private:
  std::vector<double> table_;
  std::optional<Partition> classes_;
};

// Game backed by an arbitrary callable.
class FunctionGame final : public Game {
 public:
  using Utility = std::function<double(const Coalition&)>;
  FunctionGame(int n, Utility utility, std::optional<Partition> classes = std::nullopt,
               std::string name = "function");

  double value(const Coalition& s) const override { return utility_(s); }
  std::optional<Partition> symmetry_classes() const override { return classes_; }
  std::string describe() const override { return name_; }

 private:
  Utility utility_;
  std::optional<Partition> classes_;
  std::string name_;
};

// v'(S) = v(S u pinned): the effective game once `pinned` players always rank lowest.
class PinnedGame final : public Game {
 public:
  PinnedGame(GamePtr base, Coalition pinned);

  double value(const Coalition& s) const override { return base_->value(s | pinned_); }
  std::string describe() const override;

 private:
  GamePtr base_;
  Coalition pinned_;
};

}  // namespace shapsec
