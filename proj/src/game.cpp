#include "shapsec/game.hpp"

#include <algorithm>
#include <stdexcept>

namespace shapsec {

Game::Game(int n) : n_(n) {
  if (n < 1 || n > kMaxPlayers) {
    throw std::invalid_argument("player count must be in [1, " + std::to_string(kMaxPlayers) +
                                "], got " + std::to_string(n));
  }
}

void Game::check_player(Player p) const {
  if (p < 0 || p >= n_) {
    throw std::out_of_range("player " + std::to_string(p) + " not in game of size " +
                            std::to_string(n_));
  }
}

void Game::marginals_along(std::span<const Player> order, std::span<double> out) const {
  if (out.size() < order.size()) throw std::invalid_argument("marginals_along: output too small");
  Coalition prefix;
  double prev = value(prefix);
  for (std::size_t r = 0; r < order.size(); ++r) {
    prefix.insert(order[r]);
    const double cur = value(prefix);
    out[r] = cur - prev;
    prev = cur;
  }
}

std::optional<Partition> Game::honest_view_classes(Player honest) const {
  check_player(honest);
  auto classes = symmetry_classes();
  if (!classes) return std::nullopt;
  Partition out;
  for (const auto& cls : *classes) {
    std::vector<Player> kept;
    std::copy_if(cls.begin(), cls.end(), std::back_inserter(kept),
                 [honest](Player p) { return p != honest; });
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

TabularGame::TabularGame(int n, std::vector<double> table, std::optional<Partition> classes)
    : Game(n), table_(std::move(table)), classes_(std::move(classes)) {
  if (n > 20) throw std::invalid_argument("TabularGame supports at most 20 players");
  if (table_.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("TabularGame table must have 2^n entries");
  }
  for (double v : table_) {
    if (!(v >= 0.0)) throw std::invalid_argument("utility values must be non-negative");
  }
}

double TabularGame::value(const Coalition& s) const { return table_[s.to_mask()]; }

std::string TabularGame::describe() const { return "tabular(n=" + std::to_string(size()) + ")"; }

FunctionGame::FunctionGame(int n, Utility utility, std::optional<Partition> classes,
                           std::string name)
    : Game(n), utility_(std::move(utility)), classes_(std::move(classes)), name_(std::move(name)) {
  if (!utility_) throw std::invalid_argument("FunctionGame requires a utility");
}

PinnedGame::PinnedGame(GamePtr base, Coalition pinned)
    : Game(base->size()), base_(std::move(base)), pinned_(pinned) {}

std::string PinnedGame::describe() const {
  return "pinned(" + base_->describe() + ", " + pinned_.to_string() + ")";
}

}  // namespace shapsec
