#include "shapsec/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shapsec {

namespace {

void require_at_most(const Game& game, int limit, const char* what) {
  if (game.size() > limit) {
    throw std::length_error(std::string(what) + " supports at most " + std::to_string(limit) +
                            " players, game has " + std::to_string(game.size()));
  }
}

void check_player_of(const Game& game, Player i) {
  if (i < 0 || i >= game.size()) {
    throw std::out_of_range("player " + std::to_string(i) + " not in game of size " +
                            std::to_string(game.size()));
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double marginal_contribution(const Game& game, Player i, const Coalition& s) {
  check_player_of(game, i);
  if (s.contains(i)) {
    throw std::invalid_argument("marginal contribution of player " + std::to_string(i) +
                                " requested for a coalition that already contains it");
  }
  return game.value(s.with(i)) - game.value(s);
}

std::vector<double> value_table(const Game& game) {
  require_at_most(game, kMaxExactPlayers, "value table");
  const std::uint64_t count = std::uint64_t{1} << game.size();
  std::vector<double> table(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    table[mask] = game.value(Coalition::from_mask(mask));
  }
  return table;
}

ShapleyReport make_report(std::vector<double> phi, std::vector<double> u_max) {
  if (phi.size() != u_max.size()) throw std::invalid_argument("phi / u_max size mismatch");
  ShapleyReport r;
  r.gamma_per_player.resize(phi.size());
  r.gamma = phi.empty() ? 1.0 : 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double g;
    if (phi[i] == 0.0) {
      g = (u_max[i] == 0.0) ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      g = u_max[i] / phi[i];
    }
    r.gamma_per_player[i] = g;
    r.gamma = std::max(r.gamma, g);
  }
  r.phi = std::move(phi);
  r.u_max = std::move(u_max);
  return r;
}

ShapleyReport shapley_brute_force(const Game& game) {
  require_at_most(game, kMaxExactPlayers, "exact Shapley");
  const int n = game.size();
  const auto table = value_table(game);
  // weight[s] = s! (n-1-s)! / n!
  std::vector<double> weight(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) weight[s] = 1.0 / (n * binomial(n - 1, s));

  std::vector<double> phi(n, 0.0);
  std::vector<double> u_max(n, -std::numeric_limits<double>::infinity());
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const double base = table[mask];
    const double w = (std::popcount(mask) < n) ? weight[std::popcount(mask)] : 0.0;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (mask & bit) continue;
      const double mu = table[mask | bit] - base;
      phi[i] += w * mu;
      u_max[i] = std::max(u_max[i], mu);
    }
  }
  return make_report(std::move(phi), std::move(u_max));
}

ShapleyReport shapley_exact(const Game& game) {
  if (auto cf = game.closed_form()) return make_report(std::move(cf->phi), std::move(cf->u_max));
  return shapley_brute_force(game);
}

bool is_monotone(const Game& game, double tol) {
  require_at_most(game, kMaxCheckPlayers, "monotonicity check");
  const auto table = value_table(game);
  const int n = game.size();
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (!(mask & bit) && table[mask | bit] < table[mask] - tol) return false;
    }
  }
  return true;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> supermodularity_violation(
    const Game& game, double tol) {
  require_at_most(game, kMaxCheckPlayers, "supermodularity check");
  const auto table = value_table(game);
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    for (std::uint64_t t = s + 1; t < table.size(); ++t) {
      if (table[s] + table[t] > table[s | t] + table[s & t] + tol) return std::pair{s, t};
    }
  }
  return std::nullopt;
}

bool is_supermodular(const Game& game, double tol) {
  return !supermodularity_violation(game, tol).has_value();
}

bool verify_symmetry(const Game& game, const Partition& classes, double tol) {
  require_at_most(game, kMaxCheckPlayers, "symmetry check");
  const auto table = value_table(game);
  for (const auto& cls : classes) {
    for (std::size_t k = 0; k + 1 < cls.size(); ++k) {
      check_player_of(game, cls[k]);
      check_player_of(game, cls[k + 1]);
      const std::uint64_t a = std::uint64_t{1} << cls[k];
      const std::uint64_t b = std::uint64_t{1} << cls[k + 1];
      for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
        if (((mask & a) != 0) == ((mask & b) != 0)) continue;
        if (std::abs(table[mask] - table[mask ^ a ^ b]) > tol) return false;
      }
    }
  }
  return true;
}

double rank_expectation(const Game& game, Player i, int rank) {
  require_at_most(game, kMaxCheckPlayers, "rank expectation");
  check_player_of(game, i);
  const int n = game.size();
  if (rank < 1 || rank > n) {
    throw std::out_of_range("rank " + std::to_string(rank) + " outside 1.." + std::to_string(n));
  }
  const auto table = value_table(game);
  const std::uint64_t bit = std::uint64_t{1} << i;
  double sum = 0.0;
  long count = 0;
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    if ((mask & bit) || std::popcount(mask) != rank - 1) continue;
    sum += table[mask | bit] - table[mask];
    ++count;
  }
  return sum / static_cast<double>(count);
}

}  // namespace shapsec
