#include "shapsec/permgen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace shapsec {

namespace {

Perm uniform_perm(std::size_t m, Rng& rng) {
  Perm p(m);
  std::iota(p.begin(), p.end(), 0);
  rng.shuffle(std::span<int>(p));
  return p;
}

std::size_t index_in(std::span<const Player> sorted, Player p) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), p);
  if (it == sorted.end() || *it != p) {
    throw std::invalid_argument("player " + std::to_string(p) + " is not active");
  }
  return static_cast<std::size_t>(it - sorted.begin());
}

void check_sorted_unique(std::span<const Player> players) {
  if (players.empty()) throw std::invalid_argument("protocol needs at least one player");
  for (std::size_t k = 1; k < players.size(); ++k) {
    if (players[k] <= players[k - 1]) {
      throw std::invalid_argument("active player list must be sorted and unique");
    }
  }
}

// Honest parties present in `active`, plus the complementary susceptible list.
void split_roles(std::span<const Player> active, std::span<const HonestParty> honest,
                 std::vector<const HonestParty*>& honest_here, std::vector<Player>& honest_ids,
                 std::vector<Player>& susceptible) {
  honest_here.clear();
  honest_ids.clear();
  susceptible.clear();
  for (Player p : active) {
    auto it = std::find_if(honest.begin(), honest.end(),
                           [p](const HonestParty& h) { return h.id == p; });
    if (it != honest.end()) {
      honest_here.push_back(&*it);
      honest_ids.push_back(p);
    } else {
      susceptible.push_back(p);
    }
  }
}

}  // namespace

bool is_valid_perm(std::span<const int> perm, std::size_t m) {
  if (perm.size() != m) return false;
  std::vector<char> seen(m, 0);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= m || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

void Adversary::commit_permutations(const NaiveView& view, Rng& rng,
                                    std::vector<std::optional<Perm>>& out) {
  for (auto& slot : out) slot = uniform_perm(view.active.size(), rng);
}

void Adversary::open_permutations(const NaiveView&, std::span<const std::optional<Perm>>,
                                  std::vector<std::optional<Perm>>&) {}

void Adversary::commit_numbers(const ElimView& view, Rng& rng,
                               std::vector<std::optional<std::int64_t>>& out) {
  for (auto& slot : out) slot = static_cast<std::int64_t>(rng.below(view.active.size()));
}

void Adversary::open_numbers(const ElimView&, std::span<const std::optional<std::int64_t>>,
                             std::vector<std::optional<std::int64_t>>&) {}

PSampleOutcome naive_perm(std::span<const Player> players, ProtocolEnv& env) {
  check_sorted_unique(players);
  const std::size_t m = players.size();

  std::vector<const HonestParty*> honest_here;
  std::vector<Player> honest_ids, susceptible;
  split_roles(players, env.honest, honest_here, honest_ids, susceptible);
  if (honest_here.empty()) throw std::invalid_argument("NaivePerm needs at least one honest player");

  SampleInfo info{env.sample_index, players, honest_ids};
  env.adversary.begin_sample(info);

  std::vector<Perm> honest_perms;
  honest_perms.reserve(honest_here.size());
  for (const HonestParty* h : honest_here) honest_perms.push_back(uniform_perm(m, *h->rng));

  NaiveView view;
  view.phase = Phase::commit;
  view.sample_index = env.sample_index;
  view.active = players;
  view.honest = honest_ids;
  view.susceptible = susceptible;
  view.budget_remaining = env.budget.remaining(env.sample_index);

  std::vector<std::optional<Perm>> committed(susceptible.size());
  env.adversary.commit_permutations(view, env.adversary_rng, committed);
  if (committed.size() != susceptible.size()) {
    throw std::logic_error("adversary returned the wrong number of commitments");
  }
  std::vector<char> violated(susceptible.size(), 0);
  for (std::size_t k = 0; k < committed.size(); ++k) {
    if (!committed[k] || !is_valid_perm(*committed[k], m)) {
      committed[k].reset();
      violated[k] = 1;
    }
  }

  view.phase = Phase::open;
  view.honest_opened = honest_perms;
  std::vector<std::optional<Perm>> opened = committed;
  env.adversary.open_permutations(view, committed, opened);
  if (opened.size() != susceptible.size()) {
    throw std::logic_error("adversary returned the wrong number of openings");
  }
  for (std::size_t k = 0; k < opened.size(); ++k) {
    if (!violated[k] && opened[k] != committed[k]) violated[k] = 1;
  }

  PSampleOutcome out;
  for (std::size_t k = 0; k < susceptible.size(); ++k) {
    if (violated[k]) out.dev.push_back(susceptible[k]);
  }
  out.violations_used = static_cast<std::int64_t>(out.dev.size());
  env.budget.spend(out.violations_used, env.sample_index);

  // Compose in ascending id order; players are sorted so walk them directly.
  auto compose = [&](bool include_violators, Rng* fill) {
    std::vector<int> cur(m);
    std::iota(cur.begin(), cur.end(), 0);
    std::size_t hi = 0, si = 0;
    for (Player p : players) {
      const Perm* perm = nullptr;
      Perm drawn;
      if (hi < honest_ids.size() && honest_ids[hi] == p) {
        perm = &honest_perms[hi++];
      } else {
        const std::size_t k = si++;
        if (violated[k] && !include_violators) continue;
        if (committed[k]) {
          perm = &*committed[k];
        } else {
          drawn = uniform_perm(m, *fill);
          perm = &drawn;
        }
      }
      for (auto& c : cur) c = (*perm)[c];
    }
    Order order(m);
    for (std::size_t r = 0; r < m; ++r) order[r] = players[cur[r]];
    return order;
  };

  out.sigma = compose(false, nullptr);
  if (env.counterfactual_rng) {
    out.counterfactual = out.dev.empty() ? out.sigma : compose(true, env.counterfactual_rng);
  }
  env.adversary.end_sample(out);
  return out;
}

ElimOutcome rand_elim(std::span<const Player> active, ProtocolEnv& env, int round,
                      std::span<const Player> ranked, std::vector<RevealedNumber>* history) {
  check_sorted_unique(active);
  const std::size_t k = active.size();

  std::vector<const HonestParty*> honest_here;
  std::vector<Player> honest_ids, susceptible;
  split_roles(active, env.honest, honest_here, honest_ids, susceptible);
  if (honest_here.size() > 1) {
    throw std::invalid_argument("RandElim allows at most one honest player in the active set");
  }

  std::vector<RevealedNumber> local;
  std::vector<RevealedNumber>& revealed = history ? *history : local;
  const std::size_t prior = revealed.size();

  std::int64_t honest_sum = 0;
  std::vector<RevealedNumber> current;
  for (const HonestParty* h : honest_here) {
    const auto r = static_cast<std::int64_t>(h->rng->below(k));
    honest_sum += r;
    current.push_back({round, h->id, r});
  }

  ElimView view;
  view.phase = Phase::commit;
  view.sample_index = env.sample_index;
  view.round = round;
  view.active = active;
  view.honest = honest_ids;
  view.susceptible = susceptible;
  view.ranked = ranked;
  view.honest_revealed = std::span<const RevealedNumber>(revealed.data(), prior);
  view.budget_remaining = env.budget.remaining(env.sample_index);

  std::vector<std::optional<std::int64_t>> committed(susceptible.size());
  env.adversary.commit_numbers(view, env.adversary_rng, committed);
  if (committed.size() != susceptible.size()) {
    throw std::logic_error("adversary returned the wrong number of commitments");
  }
  std::vector<char> violated(susceptible.size(), 0);
  std::int64_t committed_sum = honest_sum;
  for (std::size_t s = 0; s < committed.size(); ++s) {
    if (!committed[s] || *committed[s] < 0 || *committed[s] >= static_cast<std::int64_t>(k)) {
      committed[s].reset();
      violated[s] = 1;
    } else {
      committed_sum += *committed[s];
    }
  }

  revealed.insert(revealed.end(), current.begin(), current.end());
  view.phase = Phase::open;
  view.honest_revealed = revealed;
  {
    auto first_bad = std::find(violated.begin(), violated.end(), 1);
    view.outcome_if_all_open = first_bad != violated.end()
                                   ? susceptible[first_bad - violated.begin()]
                                   : active[static_cast<std::size_t>(committed_sum) % k];
  }

  std::vector<std::optional<std::int64_t>> opened = committed;
  env.adversary.open_numbers(view, committed, opened);
  if (opened.size() != susceptible.size()) {
    throw std::logic_error("adversary returned the wrong number of openings");
  }

  ElimOutcome out;
  for (std::size_t s = 0; s < susceptible.size(); ++s) {
    if (!violated[s] && opened[s] != committed[s]) violated[s] = 1;
    if (violated[s]) out.dev.push_back(susceptible[s]);
  }
  out.violations_used = static_cast<std::int64_t>(out.dev.size());
  env.budget.spend(out.violations_used, env.sample_index);

  out.eliminated = out.dev.empty() ? active[static_cast<std::size_t>(committed_sum) % k]
                                   : out.dev.front();

  std::int64_t cf_sum = committed_sum;
  for (std::size_t s = 0; s < susceptible.size(); ++s) {
    if (!committed[s] && env.counterfactual_rng) {
      cf_sum += static_cast<std::int64_t>(env.counterfactual_rng->below(k));
    }
  }
  out.counterfactual = active[static_cast<std::size_t>(cf_sum) % k];
  return out;
}

PSampleOutcome seq_perm(std::span<const Player> players, ProtocolEnv& env) {
  check_sorted_unique(players);
  std::vector<Player> honest_ids;
  for (const auto& h : env.honest) {
    if (std::binary_search(players.begin(), players.end(), h.id)) honest_ids.push_back(h.id);
  }
  if (honest_ids.empty()) throw std::invalid_argument("SeqPerm needs at least one honest player");

  SampleInfo info{env.sample_index, players, honest_ids};
  env.adversary.begin_sample(info);

  PSampleOutcome out;
  out.sigma.reserve(players.size());
  std::vector<Player> active(players.begin(), players.end());
  std::vector<RevealedNumber> history;
  bool diverged = false;
  int round = 0;

  auto remove = [&](Player p) { active.erase(active.begin() + index_in(active, p)); };

  while (!active.empty()) {
    ElimOutcome e = rand_elim(active, env, round++, out.sigma, &history);
    out.violations_used += e.violations_used;
    if (env.counterfactual_rng && !diverged && !e.dev.empty()) {
      diverged = true;
      out.counterfactual = out.sigma;
      out.counterfactual.push_back(e.counterfactual);
      std::vector<Player> rest;
      for (Player p : active) {
        if (p != e.counterfactual) rest.push_back(p);
      }
      env.counterfactual_rng->shuffle(std::span<Player>(rest));
      out.counterfactual.insert(out.counterfactual.end(), rest.begin(), rest.end());
    }
    if (e.dev.empty()) {
      out.sigma.push_back(e.eliminated);
      remove(e.eliminated);
    } else {
      for (Player d : e.dev) {
        out.sigma.push_back(d);
        remove(d);
        out.dev.push_back(d);
      }
    }
  }
  std::sort(out.dev.begin(), out.dev.end());
  if (env.counterfactual_rng && !diverged) out.counterfactual = out.sigma;
  env.adversary.end_sample(out);
  return out;
}

}  // namespace shapsec
