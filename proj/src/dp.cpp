#include "shapsec/dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "shapsec/shapley.hpp"

namespace shapsec {

namespace {

std::string bytes_text(double bytes) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g MiB", bytes / (1024.0 * 1024.0));
  return buf;
}

void check_memory(double bytes, std::size_t cap, const char* what) {
  if (bytes > static_cast<double>(cap)) {
    throw std::length_error(std::string(what) + " needs " + bytes_text(bytes) +
                            ", above the configured cap of " +
                            bytes_text(static_cast<double>(cap)));
  }
}

}  // namespace

StateSpace::StateSpace(const Game& game, Player honest, std::optional<Partition> classes,
                       std::size_t memory_cap)
    : honest_(honest), n_(game.size()) {
  if (honest < 0 || honest >= n_) throw std::out_of_range("honest player out of range");
  if (!classes) classes = game.honest_view_classes(honest);
  if (!classes) {
    if (n_ > 20) {
      throw std::invalid_argument("DP state space needs symmetry classes when n > 20");
    }
    classes.emplace();
    for (Player p = 0; p < n_; ++p) {
      if (p != honest) classes->push_back({p});
    }
  }
  classes_ = std::move(*classes);

  class_of_.assign(n_, -2);
  class_of_[honest] = -1;
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    auto& cls = classes_[k];
    if (cls.empty()) throw std::invalid_argument("empty symmetry class");
    std::sort(cls.begin(), cls.end());
    for (Player p : cls) {
      if (p < 0 || p >= n_ || class_of_[p] != -2) {
        throw std::invalid_argument("classes must partition the non-honest players");
      }
      class_of_[p] = static_cast<int>(k);
    }
  }
  if (std::find(class_of_.begin(), class_of_.end(), -2) != class_of_.end()) {
    throw std::invalid_argument("classes must cover every non-honest player");
  }

  double count = 1.0;
  stride_.resize(classes_.size());
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    stride_[k] = static_cast<std::size_t>(count);
    count *= static_cast<double>(classes_[k].size() + 1);
  }
  check_memory(count * (sizeof(int) + sizeof(double)), memory_cap, "DP state space");
  const auto total = static_cast<std::size_t>(count);

  set_size_.resize(total);
  gain_.resize(total);
  for (std::size_t s = 0; s < total; ++s) {
    int size = 1;
    Coalition out;
    for (std::size_t k = 0; k < classes_.size(); ++k) {
      const int left = remaining(s, static_cast<int>(k));
      size += left;
      const int gone = static_cast<int>(classes_[k].size()) - left;
      for (int g = 0; g < gone; ++g) out.insert(classes_[k][g]);
    }
    set_size_[s] = size;
    gain_[s] = game.value(out.with(honest)) - game.value(out);
  }
}

std::size_t StateSpace::index_of(std::span<const Player> active) const {
  std::size_t index = 0;
  bool has_honest = false;
  for (Player p : active) {
    if (p < 0 || p >= n_) throw std::out_of_range("active player out of range");
    if (p == honest_) {
      has_honest = true;
      continue;
    }
    index += stride_[class_of_[p]];
  }
  if (!has_honest) throw std::invalid_argument("DP state must contain the honest player");
  return index;
}

void fill_slice(const StateSpace& states, std::span<const double> prev, int budget,
                std::vector<double>& out) {
  const std::size_t width = static_cast<std::size_t>(budget) + 1;
  const std::size_t count = states.state_count();
  const int classes = states.class_count();
  if (!prev.empty() && prev.size() != width) throw std::invalid_argument("boundary row width");
  out.resize(count * width);

  std::vector<int> left(classes);
  std::vector<std::size_t> child(classes);
  for (std::size_t s = 0; s < count; ++s) {
    const double m = states.set_size(s);
    for (int k = 0; k < classes; ++k) {
      left[k] = states.remaining(s, k);
      child[k] = left[k] > 0 ? states.child(s, k) : 0;
    }
    for (std::size_t c = 0; c < width; ++c) {
      double total = states.honest_gain(s) + (prev.empty() ? 0.0 : prev[c]);
      for (int k = 0; k < classes; ++k) {
        if (left[k] == 0) continue;
        double best = out[child[k] * width + c];
        if (c > 0) {
          for (int l = 0; l < classes; ++l) {
            if (left[l] == 0 || (l == k && left[l] < 2)) continue;
            best = std::min(best, out[child[l] * width + c - 1]);
          }
        }
        total += left[k] * best;
      }
      out[s * width + c] = total / m;
    }
  }
}

DPTable::DPTable(std::shared_ptr<const StateSpace> states, int budget,
                 std::optional<HonestReference> reference, std::size_t memory_cap)
    : states_(std::move(states)), budget_(budget), reference_(reference) {
  if (!states_) throw std::invalid_argument("DPTable needs a state space");
  if (budget < 0) throw std::invalid_argument("DP budget must be non-negative");
  check_memory(static_cast<double>(states_->state_count()) * (budget + 1) * sizeof(double),
               memory_cap, "DP slice");
}

DPTable DPTable::for_game(const Game& game, Player honest, int budget, std::size_t memory_cap) {
  auto states = std::make_shared<const StateSpace>(game, honest, std::nullopt, memory_cap);
  std::optional<HonestReference> reference;
  if (game.closed_form() || game.size() <= kMaxExactPlayers) {
    const auto report = shapley_exact(game);
    reference = HonestReference{report.phi[honest], report.u_max[honest]};
  }
  return DPTable(std::move(states), budget, reference, memory_cap);
}

std::size_t DPTable::extend_to(std::size_t rows) {
  const std::size_t width = static_cast<std::size_t>(budget_) + 1;
  while (this->rows() < rows) {
    const std::size_t t = this->rows();
    std::span<const double> prev;
    if (t > 0) prev = std::span<const double>(boundary_).subspan((t - 1) * width, width);
    fill_slice(*states_, prev, budget_, scratch_);
    const std::size_t full = states_->full_state() * width;
    boundary_.insert(boundary_.end(), scratch_.begin() + static_cast<std::ptrdiff_t>(full),
                     scratch_.begin() + static_cast<std::ptrdiff_t>(full + width));
    check_row(t);
  }
  return this->rows();
}

void DPTable::check_row(std::size_t t) const {
  if (!reference_) return;
  const double expect = static_cast<double>(t + 1) * reference_->phi;
  const double tol = 1e-6 * std::max(1.0, std::abs(expect));
  auto fail = [&](const std::string& what) {
    throw std::logic_error("DP invariant violated at T=" + std::to_string(t) + ": " + what);
  };
  if (std::abs(boundary(t, 0) - expect) > tol) fail("no-budget value differs from (T+1) phi");
  for (int c = 1; c <= budget_; ++c) {
    if (boundary(t, c) > boundary(t, c - 1) + tol) fail("value increases with budget");
    if (boundary(t, c) < expect - c * reference_->u_max - tol) fail("value below damage bound");
  }
}

double DPTable::boundary(std::size_t t, int c) const {
  if (t >= rows() || c < 0 || c > budget_) throw std::out_of_range("DP boundary index");
  return boundary_[t * (budget_ + 1) + c];
}

std::vector<double> DPTable::build_slice(std::size_t t) const {
  if (t >= rows()) throw std::out_of_range("DP slice beyond the computed boundary");
  const std::size_t width = static_cast<std::size_t>(budget_) + 1;
  std::span<const double> prev;
  if (t > 0) prev = std::span<const double>(boundary_).subspan((t - 1) * width, width);
  std::vector<double> out;
  fill_slice(*states_, prev, budget_, out);
  return out;
}

FullDPTable::FullDPTable(std::shared_ptr<const StateSpace> states, int budget, std::size_t rows,
                         std::size_t memory_cap)
    : states_(std::move(states)), budget_(budget) {
  if (!states_) throw std::invalid_argument("FullDPTable needs a state space");
  check_memory(static_cast<double>(states_->state_count()) * (budget + 1) * sizeof(double) *
                   static_cast<double>(rows),
               memory_cap, "full DP table");
  const std::size_t width = static_cast<std::size_t>(budget) + 1;
  slices_.resize(rows);
  for (std::size_t t = 0; t < rows; ++t) {
    std::span<const double> prev;
    if (t > 0) prev = std::span<const double>(slices_[t - 1]).subspan(states_->full_state() * width, width);
    fill_slice(*states_, prev, budget, slices_[t]);
  }
}

std::span<const double> FullDPTable::slice(std::size_t t) const {
  if (t >= slices_.size()) throw std::out_of_range("DP slice index");
  return slices_[t];
}

double FullDPTable::boundary(std::size_t t, int c) const {
  return slice(t)[states_->full_state() * (budget_ + 1) + c];
}

SliceCache::SliceCache(std::shared_ptr<const DPTable> table, bool auto_prepare)
    : table_(std::move(table)), auto_prepare_(auto_prepare) {
  if (!table_) throw std::invalid_argument("SliceCache needs a table");
}

void SliceCache::prepare(std::size_t t) {
  if (current_ == t) return;
  values_ = table_->build_slice(t);
  current_ = t;
  ++builds_;
}

std::span<const double> SliceCache::slice(std::size_t t) const {
  if (current_ != t) {
    if (!auto_prepare_) {
      throw std::logic_error("slice " + std::to_string(t) + " requested but not prepared");
    }
    const_cast<SliceCache*>(this)->prepare(t);
  }
  return values_;
}

}  // namespace shapsec
