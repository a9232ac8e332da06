#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapsec/config.hpp"
#include "shapsec/game.hpp"
#include "shapsec/runner.hpp"

namespace shapsec {

enum class Command { shapley, simulate, min_samples, cdf, dp_table };
enum class GameKind { lb, pair, max_gamma, synergy };
enum class AdversaryKind { passive, cyclic, block, pair, rate, dp };
enum class BudgetKind { known, unknown, rate, none };
enum class StoppingKind { fixed, known_budget, unknown_budget, adaptive };

const char* command_name(Command command);

// Desk-scale ceilings; anything larger needs --full-scale.
inline constexpr double kDeskSimulationWork = 2e8;  // P-samples x runs x players
inline constexpr double kDeskDpWork = 2e9;          // states x (C + 1) x rows

struct ExperimentConfig {
  Command command = Command::shapley;

  GameKind game = GameKind::lb;
  int n = 0;
  Player pair_first = 0;
  Player pair_second = 1;
  std::string hypergraph;
  int padding = 0;
  Player honest = 0;

  Protocol protocol = Protocol::naive;
  AdversaryKind adversary = AdversaryKind::passive;
  bool greedy = false;
  Punishment punish = Punishment::count_only;

  BudgetKind budget_kind = BudgetKind::known;
  std::int64_t budget = 0;
  double rate = 0.0;

  double eps = 0.1;
  double delta = 0.1;
  std::optional<double> gamma;  // defaults to the game's max-to-mean ratio

  StoppingKind stopping = StoppingKind::fixed;
  std::uint64_t samples = 1000;
  std::optional<std::uint64_t> hard_cap;
  std::size_t runs = 1;
  std::uint64_t seed = 0;

  std::string output;
  std::string samples_output;
  std::size_t jobs = 1;
  bool full_scale = false;
  std::size_t memory_cap = 0;

  // min-samples
  std::optional<std::uint64_t> max_samples;
  std::optional<std::uint64_t> verify_window;
  std::string sweep;  // "", "n", "budget" or "eps"
  std::vector<std::string> sweep_values;
};

// Validates `config` for `command`; errors carry field and line diagnostics.
ExperimentConfig parse_experiment(const Config& config, Command command);

// Keys accepted by `command`.
std::vector<std::string> allowed_keys(Command command);

GamePtr build_game(const ExperimentConfig& config);

// Configured override, else the game's exact max-to-mean ratio.
double resolve_gamma(const ExperimentConfig& config, const Game& game);

// Thrown when min-samples scans its whole range without crossing the target.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MinSamplesResult {
  bool crossed = false;
  std::uint64_t samples = 0;  // minimal R when crossed
  bool verified = false;      // target held for every scanned R past the crossing
  std::uint64_t scanned = 0;
  double phi = 0.0;
  std::vector<double> per_sample_value;  // E_worst[R-1][N][C] / R for R = 1..scanned
};

// Smallest R with E_worst[R-1][N][C] / R >= (1 - eps) * phi, extending the
// boundary one row at a time up to `max_samples`, then scanning `window`
// further rows to confirm the target keeps holding.
MinSamplesResult find_min_samples(const Game& game, Player honest, int budget, double eps,
                                  std::uint64_t max_samples, std::uint64_t window,
                                  std::size_t memory_cap);

struct CdfSummary {
  std::vector<double> sorted_eps_hat;
  double phi = 0.0;
  double fraction_above_eps = 0.0;
  double cdf_at_eps = 0.0;
  bool point_right_of_curve = false;
};

// Runs the configured allocation M times; run m uses derive_seed(seed, "run", m).
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const GamePtr& game);

void cmd_shapley(const ExperimentConfig& config, std::ostream& out);
std::vector<RunRecord> cmd_simulate(const ExperimentConfig& config, std::ostream& out);
std::vector<MinSamplesResult> cmd_min_samples(const ExperimentConfig& config, std::ostream& out);
CdfSummary cmd_cdf(const ExperimentConfig& config, std::ostream& out);
void cmd_dp_table(const ExperimentConfig& config, std::ostream& out);

}  // namespace shapsec
