#include "shapsec/stopping.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace shapsec {

namespace {

void check_eps_delta(double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

void check_gamma(double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("Gamma must be finite and at least 1");
  }
}

SampleCount ceil_count(double real) {
  // Guard against values like 6315.99999999 caused by rounding in the inputs.
  const double rounded = std::round(real);
  const double used = std::abs(real - rounded) < 1e-9 * std::max(1.0, rounded) ? rounded
                                                                                : std::ceil(real);
  return {real, static_cast<std::uint64_t>(used)};
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

KnownBudgetPlan known_budget_samples(double eps, double delta, std::int64_t budget, double gamma) {
  check_eps_delta(eps, delta);
  check_gamma(gamma);
  if (budget < 0) throw std::invalid_argument("budget must be non-negative");
  KnownBudgetPlan plan;
  plan.chernoff = ceil_count(8.0 * gamma / (eps * eps) * std::log(1.0 / delta));
  plan.budget = ceil_count(2.0 * static_cast<double>(budget) * gamma / eps);
  plan.samples = std::max(plan.chernoff.used, plan.budget.used);
  return plan;
}

SampleCount unknown_budget_min_samples(double eps, double delta, double gamma) {
  check_eps_delta(eps, delta);
  check_gamma(gamma);
  const double e2 = eps * eps;
  return ceil_count(8.0 * gamma / e2 * (std::log(16.0 * gamma / e2) + std::log(1.0 / delta)));
}

double adaptive_threshold(int level, double delta, double gamma) {
  const double e = std::ldexp(1.0, -level);
  return 8.0 * gamma / (e * e) * (level * std::log(2.0) + std::log(1.0 / delta));
}

StoppingRule StoppingRule::fixed(std::uint64_t samples, std::optional<double> eps) {
  if (samples == 0) throw std::invalid_argument("fixed stopping needs at least one sample");
  StoppingRule r(Kind::fixed, eps.value_or(std::numeric_limits<double>::quiet_NaN()), 0.0, 1.0);
  r.planned_ = samples;
  return r;
}

StoppingRule StoppingRule::known_budget(double eps, double delta, std::int64_t budget,
                                        double gamma) {
  StoppingRule r(Kind::known_budget, eps, delta, gamma);
  r.planned_ = known_budget_samples(eps, delta, budget, gamma).samples;
  return r;
}

StoppingRule StoppingRule::unknown_budget(double eps, double delta, double gamma) {
  StoppingRule r(Kind::unknown_budget, eps, delta, gamma);
  r.min_samples_ = unknown_budget_min_samples(eps, delta, gamma).used;
  return r;
}

StoppingRule StoppingRule::adaptive(double eps, double delta, double gamma) {
  check_eps_delta(eps, delta);
  check_gamma(gamma);
  return StoppingRule(Kind::adaptive, eps, delta, gamma);
}

bool StoppingRule::done() const {
  switch (kind_) {
    case Kind::fixed:
    case Kind::known_budget:
      return samples_ >= planned_;
    case Kind::unknown_budget:
    case Kind::adaptive:
      return stopped_;
  }
  return true;
}

StoppingRule::Action StoppingRule::observe(std::int64_t violations) {
  if (done()) throw std::logic_error("P-sample observed after the stopping rule fired");
  ++samples_;
  violations_ += violations;
  if (violations > 0) ++violating_samples_;
  const double r = static_cast<double>(samples_);

  switch (kind_) {
    case Kind::fixed:
    case Kind::known_budget:
      return done() ? Action::stop : Action::none;
    case Kind::unknown_budget:
      if (samples_ >= min_samples_ &&
          static_cast<double>(violating_samples_) / r <= eps_ / (2.0 * gamma_)) {
        stopped_ = true;
        return Action::stop;
      }
      return Action::none;
    case Kind::adaptive: {
      const int next = level_ + 1;
      if (r < adaptive_threshold(next, delta_, gamma_)) return Action::none;
      if (static_cast<double>(violations_) / r > std::ldexp(1.0, -next) / (2.0 * gamma_)) {
        stopped_ = true;
        return Action::stop;
      }
      level_ = next;
      if (std::ldexp(1.0, -level_) <= eps_) stopped_ = true;
      return Action::snapshot;
    }
  }
  return Action::none;
}

double StoppingRule::epsilon_hat() const {
  return kind_ == Kind::adaptive ? std::ldexp(1.0, -level_) : eps_;
}

std::optional<std::uint64_t> StoppingRule::planned_samples() const {
  if (kind_ == Kind::fixed || kind_ == Kind::known_budget) return planned_;
  return std::nullopt;
}

std::optional<std::uint64_t> StoppingRule::natural_bound() const {
  switch (kind_) {
    case Kind::fixed:
    case Kind::known_budget:
      return planned_;
    case Kind::adaptive: {
      // The loop ends no later than the threshold of the level reaching eps.
      int level = 0;
      while (std::ldexp(1.0, -level) > eps_) ++level;
      return static_cast<std::uint64_t>(std::ceil(adaptive_threshold(level, delta_, gamma_)));
    }
    case Kind::unknown_budget:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string StoppingRule::describe() const {
  switch (kind_) {
    case Kind::fixed:
      return "fixed(R=" + std::to_string(planned_) + ")";
    case Kind::known_budget:
      return "known_budget(R=" + std::to_string(planned_) + ")";
    case Kind::unknown_budget:
      return "unknown_budget(R0=" + std::to_string(min_samples_) + ", eps=" + num(eps_) +
             ", Gamma=" + num(gamma_) + ")";
    case Kind::adaptive:
      return "adaptive(eps=" + num(eps_) + ", delta=" + num(delta_) + ", Gamma=" + num(gamma_) +
             ")";
  }
  return "?";
}

}  // namespace shapsec
