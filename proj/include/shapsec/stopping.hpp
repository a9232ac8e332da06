#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace shapsec {

// A sample-count formula: the real value and the ceiling actually used.
struct SampleCount {
  double real = 0.0;
  std::uint64_t used = 0;
};

// max{ceil(8 G / e^2 ln(1/d)), ceil(2 C G / e)}; `chernoff` and `budget` are the two terms.
struct KnownBudgetPlan {
  SampleCount chernoff;
  SampleCount budget;
  std::uint64_t samples = 0;
};
KnownBudgetPlan known_budget_samples(double eps, double delta, std::int64_t budget, double gamma);

// ceil(8 G / e^2 (ln(16 G / e^2) + ln(1/d))).
SampleCount unknown_budget_min_samples(double eps, double delta, double gamma);

// 8 G / e_k^2 ln(2^k / d) with e_k = 2^-k.
double adaptive_threshold(int level, double delta, double gamma);

class StoppingRule {
 public:
  enum class Kind { fixed, known_budget, unknown_budget, adaptive };
  enum class Action { none, snapshot, stop };

  static StoppingRule fixed(std::uint64_t samples, std::optional<double> eps = std::nullopt);
  static StoppingRule known_budget(double eps, double delta, std::int64_t budget, double gamma);
  static StoppingRule unknown_budget(double eps, double delta, double gamma);
  static StoppingRule adaptive(double eps, double delta, double gamma);

  Kind kind() const { return kind_; }
  double eps() const { return eps_; }
  double delta() const { return delta_; }
  double gamma() const { return gamma_; }

  bool done() const;

  // Records one P-sample with `violations` detected players. For the adaptive
  // rule, `snapshot` asks the caller to store z / R before continuing.
  Action observe(std::int64_t violations);

  std::uint64_t samples() const { return samples_; }
  std::int64_t violations() const { return violations_; }
  std::uint64_t violating_samples() const { return violating_samples_; }
  int level() const { return level_; }

  // Adaptive: 2^-k for the current level; otherwise the configured eps.
  double epsilon_hat() const;

  // Sample count when fixed in advance (fixed and known_budget).
  std::optional<std::uint64_t> planned_samples() const;

  // Cap a run must not exceed before the rule is expected to fire.
  std::optional<std::uint64_t> natural_bound() const;

  std::string describe() const;

 private:
  StoppingRule(Kind kind, double eps, double delta, double gamma)
      : kind_(kind), eps_(eps), delta_(delta), gamma_(gamma) {}

  Kind kind_;
  double eps_;
  double delta_;
  double gamma_;
  std::uint64_t planned_ = 0;
  std::uint64_t min_samples_ = 0;
  std::uint64_t samples_ = 0;
  std::int64_t violations_ = 0;
  std::uint64_t violating_samples_ = 0;
  int level_ = 0;
  bool stopped_ = false;
};

}  // namespace shapsec
