#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "shapsec/game.hpp"
#include "shapsec/hypergraph.hpp"

namespace oracle {

using shapsec::Game;
using shapsec::GamePtr;
using shapsec::Player;

// Average marginal contribution over all n! join orders; n <= 9.
std::vector<double> permutation_shapley(const Game& game);

// Expected honest reward with T + 1 samples left, active set `active` (bit mask,
// contains honest) and budget c, computed over explicit masks.
class MaskDP {
 public:
  MaskDP(const Game& game, Player honest, int budget);
  double value(int t, std::uint64_t active, int c);
  double boundary(int t, int c) { return value(t, full_, c); }

 private:
  const Game& game_;
  Player honest_;
  int n_;
  int budget_;
  std::uint64_t full_;
  std::vector<std::vector<double>> memo_;  // [t][active * (C+1) + c]
};

enum class AbortRule {
  others_only,      // abort some j in S \ {honest, drawn}
  include_drawn,    // j may also be the drawn player
  any_subset,       // abort any non-empty set of susceptible players at once
};

// Exhaustive game tree over protocol states (ranked prefix, budget): every
// elimination draw and every permitted abort choice, minimizing the honest
// player's expected total reward over `samples` P-samples.
double game_tree_value(const Game& game, Player honest, int samples, int budget, AbortRule rule);

// v(S) = max over T subset of S of w(T), w random in [0, scale) with sparsity.
GamePtr random_monotone_game(int n, std::mt19937_64& rng);

// v(S) = sum over T subset of S of a_T with random non-negative a_T.
GamePtr random_supermodular_game(int n, std::mt19937_64& rng);

// Random simple graph with at least one edge, unit or random weights.
shapsec::Hypergraph random_simple_graph(int n, std::mt19937_64& rng, bool unit_weights);

}  // namespace oracle
