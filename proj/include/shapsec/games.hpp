#pragma once

#include <memory>

#include "shapsec/game.hpp"
#include "shapsec/hypergraph.hpp"

namespace shapsec {

// Synthetic game for the SeqPerm lower bound. Player 0 is the honest player,
// players 1..n/2 form the special set Q and the rest are ordinary.
//   v(N) = 2a, v(N \ {q}) = a for q in {0} u Q, v(S) = 0 otherwise,
// with a = 2n(n-1)/(3n-2).
class LowerBoundGame final : public Game {
 public:
  explicit LowerBoundGame(int n);

  double alpha() const { return alpha_; }
  Player honest() const { return 0; }
  bool in_q(Player p) const { return p >= 1 && p <= size() / 2; }

  double value(const Coalition& s) const override;
  void marginals_along(std::span<const Player> order, std::span<double> out) const override;
  std::optional<ClosedForm> closed_form() const override;
  std::optional<Partition> symmetry_classes() const override;
  std::string describe() const override;

 private:
  double alpha_;
};

// v(S) = 2 iff both special players are in S.
class PairGame final : public Game {
 public:
  PairGame(int n, Player first, Player second);

  Player first() const { return first_; }
  Player second() const { return second_; }

  double value(const Coalition& s) const override;
  void marginals_along(std::span<const Player> order, std::span<double> out) const override;
  std::optional<ClosedForm> closed_form() const override;
  std::optional<Partition> symmetry_classes() const override;
  std::string describe() const override;

 private:
  Player first_;
  Player second_;
};

// Monotone game attaining the largest possible max-to-mean ratio:
// v(S) = 1 iff S strictly contains the base set {0, ..., k-1}, k = floor((n-1)/2).
class MaxGammaGame final : public Game {
 public:
  explicit MaxGammaGame(int n);

  int base_size() const { return k_; }

  double value(const Coalition& s) const override;
  std::optional<ClosedForm> closed_form() const override;
  std::optional<Partition> symmetry_classes() const override;
  std::string describe() const override;

 private:
  int k_;
  Coalition base_;
};

// Edge synergy game: v(S) is the total weight of hyperedges contained in S.
class SynergyGame final : public Game {
 public:
  explicit SynergyGame(Hypergraph graph);

  const Hypergraph& graph() const { return graph_; }

  double value(const Coalition& s) const override;
  void marginals_along(std::span<const Player> order, std::span<double> out) const override;
  std::optional<ClosedForm> closed_form() const override;
  std::optional<Partition> symmetry_classes() const override;
  std::optional<Partition> honest_view_classes(Player honest) const override;
  std::string describe() const override;

 private:
  Partition classes_under(const std::vector<const HyperEdge*>& edges, Player skip) const;

  Hypergraph graph_;
  std::vector<Coalition> edge_sets_;
  Partition classes_;
};

std::shared_ptr<const LowerBoundGame> make_lb_game(int n);
std::shared_ptr<const PairGame> make_pair_game(int n, Player first, Player second);
std::shared_ptr<const MaxGammaGame> make_max_gamma_game(int n);
std::shared_ptr<const SynergyGame> make_synergy_game(Hypergraph graph);

}  // namespace shapsec
