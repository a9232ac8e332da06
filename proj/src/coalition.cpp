#include "shapsec/coalition.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace shapsec {

namespace {

void check_player(Player p) {
  if (p < 0 || p >= kMaxPlayers) {
    throw std::out_of_range("player id " + std::to_string(p) + " outside [0, " +
                            std::to_string(kMaxPlayers) + ")");
  }
}

}  // namespace

Coalition::Coalition(std::initializer_list<Player> players) {
  for (Player p : players) {
    check_player(p);
    insert(p);
  }
}

Coalition::Coalition(std::span<const Player> players) {
  for (Player p : players) {
    check_player(p);
    insert(p);
  }
}

Coalition Coalition::from_mask(std::uint64_t mask) {
  Coalition c;
  for (int p = 0; mask != 0; ++p, mask >>= 1) {
    if (mask & 1U) c.insert(p);
  }
  return c;
}

Coalition Coalition::all(int n) {
  if (n < 0 || n > kMaxPlayers) throw std::out_of_range("player count out of range");
  Coalition c;
  for (int p = 0; p < n; ++p) c.insert(p);
  return c;
}

Coalition Coalition::with(Player p) const {
  Coalition c = *this;
  c.insert(p);
  return c;
}

Coalition Coalition::without(Player p) const {
  Coalition c = *this;
  c.erase(p);
  return c;
}

std::uint64_t Coalition::to_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t w = 0; w < 64; ++w) {
    if (bits_.test(w)) mask |= std::uint64_t{1} << w;
  }
  if (static_cast<int>(std::popcount(mask)) != size()) {
    throw std::out_of_range("coalition has members >= 64; no mask form");
  }
  return mask;
}

std::vector<Player> Coalition::members() const {
  std::vector<Player> out;
  out.reserve(bits_.count());
  for (std::size_t p = bits_._Find_first(); p < bits_.size(); p = bits_._Find_next(p)) {
    out.push_back(static_cast<Player>(p));
  }
  return out;
}

std::string Coalition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (Player p : members()) {
    if (!first) os << ',';
    os << p;
    first = false;
  }
  os << '}';
  return os.str();
}

void check_order(std::span<const Player> order, std::span<const Player> players) {
  if (order.size() != players.size()) {
    throw std::invalid_argument("order length " + std::to_string(order.size()) +
                                " does not match player count " + std::to_string(players.size()));
  }
  std::vector<Player> a(order.begin(), order.end());
  std::vector<Player> b(players.begin(), players.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end()) {
    throw std::invalid_argument("order is not a bijection onto the player set");
  }
}

}  // namespace shapsec
