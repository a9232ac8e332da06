#pragma once

#include <bitset>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace shapsec {

using Player = int;

// Players ranked from least preferable (index 0, rank 1) to most preferable.
using Order = std::vector<Player>;

// Partition of (a subset of) the players into interchangeable classes.
using Partition = std::vector<std::vector<Player>>;

inline constexpr int kMaxPlayers = 512;

// Fixed-width player set keyed by player index.
class Coalition {
 public:
  Coalition() = default;
  Coalition(std::initializer_list<Player> players);
  explicit Coalition(std::span<const Player> players);

  // Bits of `mask` become players 0..63.
  static Coalition from_mask(std::uint64_t mask);
  static Coalition all(int n);

  bool contains(Player p) const { return bits_.test(static_cast<std::size_t>(p)); }
  void insert(Player p) { bits_.set(static_cast<std::size_t>(p)); }
  void erase(Player p) { bits_.reset(static_cast<std::size_t>(p)); }
  int size() const { return static_cast<int>(bits_.count()); }
  bool empty() const { return bits_.none(); }

  Coalition with(Player p) const;
  Coalition without(Player p) const;

  // Requires every member < 64.
  std::uint64_t to_mask() const;
  std::vector<Player> members() const;
  std::string to_string() const;

  Coalition& operator|=(const Coalition& o) {
    bits_ |= o.bits_;
    return *this;
  }
  Coalition& operator&=(const Coalition& o) {
    bits_ &= o.bits_;
    return *this;
  }
  friend Coalition operator|(Coalition a, const Coalition& b) { return a |= b; }
  friend Coalition operator&(Coalition a, const Coalition& b) { return a &= b; }
  friend bool operator==(const Coalition&, const Coalition&) = default;

  bool is_subset_of(const Coalition& o) const { return (bits_ & ~o.bits_).none(); }

 private:
  std::bitset<kMaxPlayers> bits_;
};

// Throws std::invalid_argument unless `order` is a bijection onto `players`.
void check_order(std::span<const Player> order, std::span<const Player> players);

}  // namespace shapsec
