#include "shapsec/games.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace shapsec {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

// ---- LowerBoundGame ----

LowerBoundGame::LowerBoundGame(int n)
    : Game(n), alpha_(2.0 * n * (n - 1) / (3.0 * n - 2.0)) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("lower-bound game needs an even n >= 4, got " + std::to_string(n));
  }
}

double LowerBoundGame::value(const Coalition& s) const {
  const int n = size();
  const int k = s.size();
  if (k == n) return 2.0 * alpha_;
  if (k != n - 1) return 0.0;
  for (Player p = 0; p < n; ++p) {
    if (!s.contains(p)) return (p == 0 || in_q(p)) ? alpha_ : 0.0;
  }
  return 0.0;  // s holds players outside 0..n-1
}

void LowerBoundGame::marginals_along(std::span<const Player> order, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(size());
  if (order.size() != n) {
    Game::marginals_along(order, out);
    return;
  }
  if (out.size() < n) throw std::invalid_argument("marginals_along: output too small");
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  const Player last = order[n - 1];
  const double without_last = (last == 0 || in_q(last)) ? alpha_ : 0.0;
  out[n - 2] = without_last;
  out[n - 1] = 2.0 * alpha_ - without_last;
}

std::optional<ClosedForm> LowerBoundGame::closed_form() const {
  const int n = size();
  ClosedForm cf;
  cf.phi.assign(n, 1.0);
  cf.u_max.assign(n, alpha_);
  for (Player p = n / 2 + 1; p < n; ++p) {
    cf.phi[p] = (5.0 * n - 2.0) / (3.0 * n - 2.0);
    cf.u_max[p] = 2.0 * alpha_;
  }
  return cf;
}

std::optional<Partition> LowerBoundGame::symmetry_classes() const {
  const int n = size();
  Partition classes(3);
  classes[0].push_back(0);
  for (Player p = 1; p <= n / 2; ++p) classes[1].push_back(p);
  for (Player p = n / 2 + 1; p < n; ++p) classes[2].push_back(p);
  return classes;
}

std::string LowerBoundGame::describe() const { return "lb(n=" + std::to_string(size()) + ")"; }

// ---- PairGame ----

PairGame::PairGame(int n, Player first, Player second) : Game(n), first_(first), second_(second) {
  check_player(first);
  check_player(second);
  if (first == second) throw std::invalid_argument("pair game needs two distinct players");
}

double PairGame::value(const Coalition& s) const {
  return (s.contains(first_) && s.contains(second_)) ? 2.0 : 0.0;
}

void PairGame::marginals_along(std::span<const Player> order, std::span<double> out) const {
  if (out.size() < order.size()) throw std::invalid_argument("marginals_along: output too small");
  int seen = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    out[r] = 0.0;
    if (order[r] == first_ || order[r] == second_) {
      if (++seen == 2) out[r] = 2.0;
    }
  }
}

std::optional<ClosedForm> PairGame::closed_form() const {
  ClosedForm cf;
  cf.phi.assign(size(), 0.0);
  cf.u_max.assign(size(), 0.0);
  cf.phi[first_] = cf.phi[second_] = 1.0;
  cf.u_max[first_] = cf.u_max[second_] = 2.0;
  return cf;
}

std::optional<Partition> PairGame::symmetry_classes() const {
  Partition classes{{std::min(first_, second_), std::max(first_, second_)}};
  std::vector<Player> rest;
  for (Player p = 0; p < size(); ++p) {
    if (p != first_ && p != second_) rest.push_back(p);
  }
  if (!rest.empty()) classes.push_back(std::move(rest));
  return classes;
}

std::string PairGame::describe() const {
  return "pair(n=" + std::to_string(size()) + ", " + std::to_string(first_) + ", " +
         std::to_string(second_) + ")";
}

// ---- MaxGammaGame ----

MaxGammaGame::MaxGammaGame(int n) : Game(n), k_((n - 1) / 2) {
  for (Player p = 0; p < k_; ++p) base_.insert(p);
}

double MaxGammaGame::value(const Coalition& s) const {
  return (s.size() > k_ && base_.is_subset_of(s)) ? 1.0 : 0.0;
}

std::optional<ClosedForm> MaxGammaGame::closed_form() const {
  const int n = size();
  ClosedForm cf;
  const double outside = 1.0 / (n * binomial(n - 1, k_));
  cf.phi.assign(n, outside);
  if (k_ > 0) {
    const double inside = (1.0 - (n - k_) * outside) / k_;
    std::fill(cf.phi.begin(), cf.phi.begin() + k_, inside);
  }
  cf.u_max.assign(n, 1.0);
  return cf;
}

std::optional<Partition> MaxGammaGame::symmetry_classes() const {
  Partition classes;
  std::vector<Player> inside, outside;
  for (Player p = 0; p < size(); ++p) (p < k_ ? inside : outside).push_back(p);
  if (!inside.empty()) classes.push_back(std::move(inside));
  classes.push_back(std::move(outside));
  return classes;
}

std::string MaxGammaGame::describe() const {
  return "max-gamma(n=" + std::to_string(size()) + ")";
}

// ---- SynergyGame ----

SynergyGame::SynergyGame(Hypergraph graph) : Game(graph.vertex_count()), graph_(std::move(graph)) {
  edge_sets_.reserve(graph_.edges().size());
  for (const auto& e : graph_.edges()) edge_sets_.emplace_back(std::span<const Player>(e.vertices));
  std::vector<const HyperEdge*> all;
  for (const auto& e : graph_.edges()) all.push_back(&e);
  classes_ = classes_under(all, -1);
}

double SynergyGame::value(const Coalition& s) const {
  double total = 0.0;
  const auto& edges = graph_.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edge_sets_[k].is_subset_of(s)) total += edges[k].weight;
  }
  return total;
}

void SynergyGame::marginals_along(std::span<const Player> order, std::span<double> out) const {
  if (out.size() < order.size()) throw std::invalid_argument("marginals_along: output too small");
  std::vector<int> rank(static_cast<std::size_t>(size()), -1);
  for (std::size_t r = 0; r < order.size(); ++r) {
    check_player(order[r]);
    rank[order[r]] = static_cast<int>(r);
    out[r] = 0.0;
  }
  for (const auto& e : graph_.edges()) {
    int completing = -1;
    for (Player v : e.vertices) {
      if (rank[v] < 0) {
        completing = -1;
        break;
      }
      completing = std::max(completing, rank[v]);
    }
    if (completing >= 0) out[completing] += e.weight;
  }
}

std::optional<ClosedForm> SynergyGame::closed_form() const {
  ClosedForm cf;
  cf.phi.assign(size(), 0.0);
  cf.u_max.assign(size(), 0.0);
  for (const auto& e : graph_.edges()) {
    const double share = e.weight / static_cast<double>(e.vertices.size());
    for (Player v : e.vertices) {
      cf.phi[v] += share;
      cf.u_max[v] += e.weight;
    }
  }
  return cf;
}

std::optional<Partition> SynergyGame::symmetry_classes() const { return classes_; }

std::optional<Partition> SynergyGame::honest_view_classes(Player honest) const {
  check_player(honest);
  std::vector<const HyperEdge*> incident;
  for (const auto& e : graph_.edges()) {
    if (std::binary_search(e.vertices.begin(), e.vertices.end(), honest)) incident.push_back(&e);
  }
  return classes_under(incident, honest);
}

// Groups players whose transposition maps the given edge multiset onto itself.
// Such transpositions generate a group, so the relation is an equivalence.
Partition SynergyGame::classes_under(const std::vector<const HyperEdge*>& edges,
                                     Player skip) const {
  const int n = size();
  std::map<std::vector<Player>, double> lookup;
  std::vector<std::vector<const HyperEdge*>> incident(static_cast<std::size_t>(n));
  for (const HyperEdge* e : edges) {
    lookup[e->vertices] += e->weight;
    for (Player v : e->vertices) incident[v].push_back(e);
  }

  auto swappable = [&](Player a, Player b) {
    auto check = [&](const std::vector<const HyperEdge*>& list) {
      for (const HyperEdge* e : list) {
        std::vector<Player> image = e->vertices;
        for (Player& v : image) {
          if (v == a) v = b;
          else if (v == b) v = a;
        }
        std::sort(image.begin(), image.end());
        auto it = lookup.find(image);
        if (it == lookup.end() || it->second != lookup.at(e->vertices)) return false;
      }
      return true;
    };
    if (incident[a].size() != incident[b].size()) return false;
    return check(incident[a]) && check(incident[b]);
  };

  Partition classes;
  for (Player p = 0; p < n; ++p) {
    if (p == skip) continue;
    bool placed = false;
    for (auto& cls : classes) {
      if (swappable(cls.front(), p)) {
        cls.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({p});
  }
  return classes;
}

std::string SynergyGame::describe() const {
  return "synergy(n=" + std::to_string(size()) + ", edges=" +
         std::to_string(graph_.edges().size()) + ", total=" +
         fmt_num(value(Coalition::all(size()))) + ")";
}

std::shared_ptr<const LowerBoundGame> make_lb_game(int n) {
  return std::make_shared<const LowerBoundGame>(n);
}

std::shared_ptr<const PairGame> make_pair_game(int n, Player first, Player second) {
  return std::make_shared<const PairGame>(n, first, second);
}

std::shared_ptr<const MaxGammaGame> make_max_gamma_game(int n) {
  return std::make_shared<const MaxGammaGame>(n);
}

std::shared_ptr<const SynergyGame> make_synergy_game(Hypergraph graph) {
  return std::make_shared<const SynergyGame>(std::move(graph));
}

}  // namespace shapsec
