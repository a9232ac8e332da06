#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "shapsec/game.hpp"

namespace shapsec {

inline constexpr int kMaxExactPlayers = 20;
inline constexpr int kMaxCheckPlayers = 12;

struct ShapleyReport {
  std::vector<double> phi;
  std::vector<double> u_max;
  std::vector<double> gamma_per_player;  // u_max / phi with 0/0 = 1
  double gamma = 1.0;
};

// v(S u {i}) - v(S). Throws std::invalid_argument if i is in S.
double marginal_contribution(const Game& game, Player i, const Coalition& s);

// v over every coalition mask; n <= 20.
std::vector<double> value_table(const Game& game);

ShapleyReport make_report(std::vector<double> phi, std::vector<double> u_max);

// Closed form when the game declares one, otherwise the exhaustive subset sum
// (n <= 20). Throws std::length_error when neither applies.
ShapleyReport shapley_exact(const Game& game);

// Exhaustive subset sum that ignores declared closed forms; n <= 20.
ShapleyReport shapley_brute_force(const Game& game);

inline ShapleyReport gamma(const Game& game) { return shapley_exact(game); }

// Exhaustive structural checks; n <= 12. Tolerance is absolute on utilities.
bool is_monotone(const Game& game, double tol = 1e-12);
bool is_supermodular(const Game& game, double tol = 1e-12);

// First pair of masks (S, T) with v(S) + v(T) > v(S|T) + v(S&T), if any.
std::optional<std::pair<std::uint64_t, std::uint64_t>> supermodularity_violation(
    const Game& game, double tol = 1e-12);

// True when every class of `classes` is exchangeable under v; n <= 12.
bool verify_symmetry(const Game& game, const Partition& classes, double tol = 1e-12);

// U_j = E[mu_i(P) | i at rank j], P uniform over (j-1)-subsets of N \ {i}; n <= 12.
double rank_expectation(const Game& game, Player i, int rank);

}  // namespace shapsec
