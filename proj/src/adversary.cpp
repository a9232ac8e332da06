#include "shapsec/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace shapsec {

namespace {

std::size_t position(std::span<const Player> list, Player p) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), p) - list.begin());
}

}  // namespace

// ---- CyclicShiftAdversary ----

void CyclicShiftAdversary::commit_permutations(const NaiveView& view, Rng& rng,
                                               std::vector<std::optional<Perm>>& out) {
  if (view.honest.size() != 1 || view.honest.front() != target_) {
    throw std::invalid_argument("cyclic-shift attack needs exactly one honest player, the target");
  }
  if (view.budget_remaining < 1) {
    Adversary::commit_permutations(view, rng, out);
    return;
  }
  const std::size_t m = view.active.size();
  std::size_t before = 0;
  for (Player p : view.susceptible) before += (p < target_);
  const bool use_before = before >= view.susceptible.size() - before;

  std::size_t power = 0;
  for (std::size_t k = 0; k < view.susceptible.size(); ++k) {
    Perm perm(m);
    const bool chosen = (view.susceptible[k] < target_) == use_before;
    const std::size_t shift = chosen ? ++power : 0;
    for (std::size_t r = 0; r < m; ++r) perm[r] = static_cast<int>((r + shift) % m);
    out[k] = std::move(perm);
  }
}

void CyclicShiftAdversary::open_permutations(const NaiveView& view,
                                             std::span<const std::optional<Perm>> committed,
                                             std::vector<std::optional<Perm>>& out) {
  if (view.budget_remaining < 1) return;
  const std::size_t m = view.active.size();
  const auto target_index = static_cast<int>(position(view.active, target_));

  auto target_rank = [&](std::optional<std::size_t> dropped) {
    std::vector<int> cur(m);
    std::iota(cur.begin(), cur.end(), 0);
    std::size_t si = 0;
    for (Player p : view.active) {
      const Perm* perm;
      if (p == target_) {
        perm = &view.honest_opened.front();
      } else {
        const std::size_t k = si++;
        if (dropped == k || !committed[k]) continue;
        perm = &*committed[k];
      }
      for (auto& c : cur) c = (*perm)[c];
    }
    return static_cast<std::size_t>(std::find(cur.begin(), cur.end(), target_index) - cur.begin());
  };

  std::optional<std::size_t> best_drop;
  std::size_t best_rank = target_rank(std::nullopt);
  for (std::size_t k = 0; k < view.susceptible.size() && best_rank > 0; ++k) {
    const std::size_t rank = target_rank(k);
    if (rank < best_rank) {
      best_rank = rank;
      best_drop = k;
    }
  }
  if (best_drop) out[*best_drop].reset();
}

// ---- BlockAttackAdversary ----

BlockAttackAdversary::BlockAttackAdversary(std::shared_ptr<const LowerBoundGame> game,
                                           std::int64_t budget, double eps, bool greedy)
    : game_(std::move(game)), budget_(budget), greedy_(greedy) {
  if (!game_) throw std::invalid_argument("block attack needs the lower-bound game");
  if (!(eps > 0.0)) throw std::invalid_argument("block attack needs eps > 0");
  block_length_ = static_cast<std::uint64_t>(std::ceil(game_->size() / (10.0 * eps)));
}

void BlockAttackAdversary::open_numbers(const ElimView& view,
                                        std::span<const std::optional<std::int64_t>>,
                                        std::vector<std::optional<std::int64_t>>& out) {
  if (view.active.size() != 3 || view.honest.size() != 1 ||
      view.honest.front() != game_->honest() || !view.outcome_if_all_open) {
    return;
  }
  std::optional<Player> q, y;
  for (Player p : view.susceptible) (game_->in_q(p) ? q : y) = p;
  if (!q || !y || *view.outcome_if_all_open != *y) return;

  ++seen_;
  if (view.budget_remaining < 1) return;
  const std::uint64_t block = view.sample_index / block_length_;
  if (!greedy_) {
    if (block >= static_cast<std::uint64_t>(budget_) || last_block_used_ == block) return;
  }
  out[position(view.susceptible, *q)].reset();
  last_block_used_ = block;
}

// ---- PairAttackAdversary ----

void PairAttackAdversary::open_numbers(const ElimView& view,
                                       std::span<const std::optional<std::int64_t>>,
                                       std::vector<std::optional<std::int64_t>>& out) {
  if (view.budget_remaining < 1 || view.outcome_if_all_open != partner_) return;
  if (std::find(view.honest.begin(), view.honest.end(), honest_) == view.honest.end()) return;
  for (std::size_t k = 0; k < view.susceptible.size(); ++k) {
    if (view.susceptible[k] != partner_) {
      out[k].reset();
      return;
    }
  }
}

// ---- RateViolatorAdversary ----

void RateViolatorAdversary::open_permutations(const NaiveView& view,
                                              std::span<const std::optional<Perm>>,
                                              std::vector<std::optional<Perm>>& out) {
  if (spent_this_sample_ || view.budget_remaining < 1 || out.empty()) return;
  out.front().reset();
  spent_this_sample_ = true;
}

void RateViolatorAdversary::open_numbers(const ElimView& view,
                                         std::span<const std::optional<std::int64_t>>,
                                         std::vector<std::optional<std::int64_t>>& out) {
  if (spent_this_sample_ || view.budget_remaining < 1 || out.empty()) return;
  out.front().reset();
  spent_this_sample_ = true;
}

// ---- DPAdversary ----

DPAdversary::DPAdversary(std::shared_ptr<const SliceSource> source, std::uint64_t samples)
    : source_(std::move(source)), samples_(samples) {
  if (!source_) throw std::invalid_argument("dp adversary needs a slice source");
  if (samples_ == 0 || samples_ > source_->rows()) {
    throw std::invalid_argument("dp table has " + std::to_string(source_->rows()) +
                                " rows but the run plans " + std::to_string(samples_));
  }
}

void DPAdversary::open_numbers(const ElimView& view, std::span<const std::optional<std::int64_t>>,
                               std::vector<std::optional<std::int64_t>>& out) {
  const StateSpace& states = source_->states();
  const Player honest = states.honest();
  if (!view.outcome_if_all_open || *view.outcome_if_all_open == honest) return;
  if (std::find(view.honest.begin(), view.honest.end(), honest) == view.honest.end()) return;
  const int c = static_cast<int>(std::min<std::int64_t>(view.budget_remaining, source_->budget()));
  if (c < 1) return;
  if (view.sample_index >= samples_) {
    throw std::logic_error("dp adversary used beyond its planned sample count");
  }
  const std::size_t t = samples_ - 1 - view.sample_index;
  const auto slice = source_->slice(t);
  const std::size_t width = static_cast<std::size_t>(source_->budget()) + 1;

  const Player drawn = *view.outcome_if_all_open;
  const std::size_t state = states.index_of(view.active);
  const double keep = slice[states.child(state, states.class_of(drawn)) * width + c];

  double best = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> victim;
  for (std::size_t k = 0; k < view.susceptible.size(); ++k) {
    const Player j = view.susceptible[k];
    if (j == drawn) continue;
    const double value = slice[states.child(state, states.class_of(j)) * width + c - 1];
    if (value < best) {  // susceptible is sorted, so ties keep the smaller id
      best = value;
      victim = k;
    }
  }
  if (victim && best < keep) out[*victim].reset();
}

}  // namespace shapsec
