#include "shapsec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "shapsec/adversary.hpp"
#include "shapsec/csv.hpp"
#include "shapsec/dp.hpp"
#include "shapsec/dp_sim.hpp"
#include "shapsec/games.hpp"
#include "shapsec/hypergraph.hpp"
#include "shapsec/shapley.hpp"

namespace shapsec {

namespace {

constexpr std::int64_t kIntMax = std::numeric_limits<std::int32_t>::max();
constexpr std::int64_t kCountMax = std::int64_t{1} << 53;

const std::vector<std::string> kGameKeys = {"game",    "n",      "pair_first", "pair_second",
                                            "hypergraph", "padding", "honest",  "gamma",
                                            "output",  "jobs",   "full_scale", "seed"};

std::vector<std::string> with(std::vector<std::string> base, std::initializer_list<const char*> more) {
  for (const char* k : more) base.emplace_back(k);
  return base;
}

std::string budget_text(const ExperimentConfig& c) {
  switch (c.budget_kind) {
    case BudgetKind::known: return "known(C=" + std::to_string(c.budget) + ")";
    case BudgetKind::unknown: return "unknown(C=" + std::to_string(c.budget) + ")";
    case BudgetKind::rate: return "rate(f=" + format_number(c.rate) + ")";
    case BudgetKind::none: return "none";
  }
  return "?";
}

const char* adversary_text(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::passive: return "passive";
    case AdversaryKind::cyclic: return "cyclic";
    case AdversaryKind::block: return "block";
    case AdversaryKind::pair: return "pair";
    case AdversaryKind::rate: return "rate";
    case AdversaryKind::dp: return "dp";
  }
  return "?";
}

Budget make_budget(const ExperimentConfig& c) {
  switch (c.budget_kind) {
    case BudgetKind::known: return Budget::known(c.budget);
    case BudgetKind::unknown: return Budget::unknown(c.budget);
    case BudgetKind::rate: return Budget::rate(c.rate);
    case BudgetKind::none: return Budget::none();
  }
  return Budget::none();
}

StoppingRule make_rule(const ExperimentConfig& c, double gamma) {
  switch (c.stopping) {
    case StoppingKind::fixed: return StoppingRule::fixed(c.samples, c.eps);
    case StoppingKind::known_budget: return StoppingRule::known_budget(c.eps, c.delta, c.budget, gamma);
    case StoppingKind::unknown_budget: return StoppingRule::unknown_budget(c.eps, c.delta, gamma);
    case StoppingKind::adaptive: return StoppingRule::adaptive(c.eps, c.delta, gamma);
  }
  return StoppingRule::fixed(c.samples);
}

bool needs_gamma(const ExperimentConfig& c) { return c.stopping != StoppingKind::fixed; }

std::unique_ptr<Adversary> make_adversary(const ExperimentConfig& c, const GamePtr& game) {
  switch (c.adversary) {
    case AdversaryKind::passive: return std::make_unique<PassiveAdversary>();
    case AdversaryKind::cyclic: return std::make_unique<CyclicShiftAdversary>(c.honest);
    case AdversaryKind::block:
      return std::make_unique<BlockAttackAdversary>(
          std::dynamic_pointer_cast<const LowerBoundGame>(game), c.budget, c.eps, c.greedy);
    case AdversaryKind::pair:
      return std::make_unique<PairAttackAdversary>(
          c.honest, c.honest == c.pair_first ? c.pair_second : c.pair_first);
    case AdversaryKind::rate: return std::make_unique<RateViolatorAdversary>();
    case AdversaryKind::dp: break;
  }
  throw std::logic_error("dp adversary runs through the two-pass driver");
}

// Planned P-samples per run, for the scale gate.
double planned_samples(const ExperimentConfig& c, const StoppingRule& rule, double gamma) {
  if (auto planned = rule.planned_samples()) return static_cast<double>(*planned);
  if (auto bound = rule.natural_bound()) return static_cast<double>(*bound);
  double r = static_cast<double>(unknown_budget_min_samples(c.eps, c.delta, gamma).used);
  if (c.budget_kind == BudgetKind::known || c.budget_kind == BudgetKind::unknown) {
    r = std::max(r, std::ceil(2.0 * static_cast<double>(c.budget) * gamma / c.eps));
  }
  return r;
}

void gate(const ExperimentConfig& c, double work, double limit, const std::string& what) {
  if (c.full_scale || work <= limit) return;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s needs about %.3g units of work (desk limit %.3g); pass --full-scale to run it",
                what.c_str(), work, limit);
  throw ConfigError("full_scale", buf);
}

double dp_work(const Game& game, Player honest, int budget, double rows, std::size_t cap) {
  StateSpace states(game, honest, std::nullopt, cap);
  return static_cast<double>(states.state_count()) * (budget + 1) * rows;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("output", "cannot open `" + path + "` for writing");
  return out;
}

void write_game_meta(CsvWriter& csv, const ExperimentConfig& c, const Game& game) {
  csv.meta("command", command_name(c.command));
  csv.meta("game", game.describe());
  csv.meta("honest", std::to_string(c.honest));
}

std::optional<double> honest_phi(const Game& game, Player honest) {
  if (!game.closed_form() && game.size() > kMaxExactPlayers) return std::nullopt;
  return shapley_exact(game).phi.at(static_cast<std::size_t>(honest));
}

}  // namespace

const char* command_name(Command command) {
  switch (command) {
    case Command::shapley: return "shapley";
    case Command::simulate: return "simulate";
    case Command::min_samples: return "min-samples";
    case Command::cdf: return "cdf";
    case Command::dp_table: return "dp-table";
  }
  return "?";
}

std::vector<std::string> allowed_keys(Command command) {
  const auto run_keys =
      with(kGameKeys, {"protocol", "adversary", "greedy", "punish", "budget_kind", "budget", "rate",
                       "eps", "delta", "stopping", "samples", "hard_cap", "runs", "memory_cap_mib"});
  switch (command) {
    case Command::shapley: return kGameKeys;
    case Command::simulate: return with(run_keys, {"samples_output"});
    case Command::cdf: return run_keys;
    case Command::min_samples:
      return with(kGameKeys, {"budget", "eps", "max_samples", "verify_window", "sweep",
                              "sweep_values", "memory_cap_mib"});
    case Command::dp_table: return with(kGameKeys, {"budget", "samples", "memory_cap_mib"});
  }
  return {};
}

ExperimentConfig parse_experiment(const Config& cfg, Command command) {
  cfg.check_known(allowed_keys(command));
  ExperimentConfig c;
  c.command = command;

  const std::string game = cfg.get_choice("game", "", {"lb", "pair", "max-gamma", "synergy"});
  if (game == "lb") c.game = GameKind::lb;
  else if (game == "pair") c.game = GameKind::pair;
  else if (game == "max-gamma") c.game = GameKind::max_gamma;
  else c.game = GameKind::synergy;

  if (c.game == GameKind::synergy) {
    c.hypergraph = cfg.require_string("hypergraph");
    if (cfg.has("n")) cfg.fail("n", "synergy games take n from the hypergraph file (use padding)");
    c.padding = static_cast<int>(cfg.get_int("padding", 0, 0, kMaxPlayers));
  } else {
    if (cfg.has("hypergraph")) {
      cfg.fail("hypergraph", "exactly one game definition: `hypergraph` needs game = synergy");
    }
    if (cfg.has("padding")) cfg.fail("padding", "padding applies to synergy games only");
    if (!cfg.has("n")) throw ConfigError("n", "required field is missing");
    c.n = static_cast<int>(cfg.get_int("n", 0, 1, kMaxPlayers));
  }
  if (c.game == GameKind::pair) {
    c.pair_first = static_cast<Player>(cfg.get_int("pair_first", 0, 0, c.n - 1));
    c.pair_second = static_cast<Player>(cfg.get_int("pair_second", 1, 0, c.n - 1));
    if (c.pair_first == c.pair_second) cfg.fail("pair_second", "must differ from pair_first");
  } else {
    for (const char* k : {"pair_first", "pair_second"}) {
      if (cfg.has(k)) cfg.fail(k, "applies to game = pair only");
    }
  }
  c.honest = static_cast<Player>(cfg.get_int("honest", 0, 0, kMaxPlayers - 1));
  if (c.n > 0 && c.honest >= c.n) cfg.fail("honest", "must be below n = " + std::to_string(c.n));
  c.gamma = cfg.get_optional_double("gamma", 1.0, 1e300);
  c.output = cfg.get_string("output", "");
  c.jobs = static_cast<std::size_t>(cfg.get_int("jobs", 1, 1, 1024));
  c.full_scale = cfg.get_bool("full_scale", false);
  c.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0, 0, std::numeric_limits<std::int64_t>::max()));
  c.memory_cap = static_cast<std::size_t>(cfg.get_int("memory_cap_mib", 1024, 1, 1 << 20)) << 20;

  c.budget = cfg.get_int("budget", 0, 0, kIntMax);
  c.eps = cfg.get_double("eps", 0.1, 0.0, 1.0, true, true);
  c.delta = cfg.get_double("delta", 0.1, 0.0, 1.0, true, true);
  c.samples = static_cast<std::uint64_t>(cfg.get_int("samples", 1000, 1, kCountMax));

  if (command == Command::simulate || command == Command::cdf) {
    const std::string adv =
        cfg.get_choice("adversary", "passive", {"passive", "cyclic", "block", "pair", "rate", "dp"});
    for (auto k : {AdversaryKind::passive, AdversaryKind::cyclic, AdversaryKind::block,
                   AdversaryKind::pair, AdversaryKind::rate, AdversaryKind::dp}) {
      if (adv == adversary_text(k)) c.adversary = k;
    }
    const bool seq_default = c.adversary == AdversaryKind::block ||
                             c.adversary == AdversaryKind::pair || c.adversary == AdversaryKind::dp;
    const std::string protocol = cfg.get_choice("protocol", seq_default ? "seq" : "naive", {"naive", "seq"});
    c.protocol = protocol == "seq" ? Protocol::seq : Protocol::naive;
    c.greedy = cfg.get_bool("greedy", false);
    c.punish = cfg.get_choice("punish", "count-only", {"count-only", "perpetual"}) == "perpetual"
                   ? Punishment::perpetual
                   : Punishment::count_only;

    const std::string bk = cfg.get_choice("budget_kind", "known", {"known", "unknown", "rate", "none"});
    c.budget_kind = bk == "known"     ? BudgetKind::known
                    : bk == "unknown" ? BudgetKind::unknown
                    : bk == "rate"    ? BudgetKind::rate
                                      : BudgetKind::none;
    if (c.budget_kind == BudgetKind::rate) {
      c.rate = cfg.get_double("rate", 0.0, 0.0, 1.0);
      if (cfg.has("budget")) cfg.fail("budget", "rate budgets take `rate`, not `budget`");
    } else if (cfg.has("rate")) {
      cfg.fail("rate", "needs budget_kind = rate");
    }

    const std::string st = cfg.get_choice("stopping", "fixed",
                                          {"fixed", "known-budget", "unknown-budget", "adaptive"});
    c.stopping = st == "fixed"          ? StoppingKind::fixed
                 : st == "known-budget" ? StoppingKind::known_budget
                 : st == "unknown-budget" ? StoppingKind::unknown_budget
                                          : StoppingKind::adaptive;
    if (c.stopping != StoppingKind::fixed && cfg.has("samples")) {
      cfg.fail("samples", "only used with stopping = fixed");
    }
    if (c.stopping == StoppingKind::known_budget && c.budget_kind != BudgetKind::known) {
      cfg.fail("stopping", "known-budget stopping needs budget_kind = known");
    }
    if (c.stopping == StoppingKind::adaptive) {
      if (c.protocol == Protocol::seq) cfg.fail("protocol", "adaptive stopping runs over naive");
    }
    if (cfg.has("hard_cap")) {
      c.hard_cap = static_cast<std::uint64_t>(cfg.get_int("hard_cap", 1, 1, kCountMax));
    }
    c.runs = static_cast<std::size_t>(cfg.get_int("runs", 1, 1, 100'000'000));
    if (command == Command::simulate) c.samples_output = cfg.get_string("samples_output", "");

    switch (c.adversary) {
      case AdversaryKind::cyclic:
        if (c.protocol != Protocol::naive) cfg.fail("protocol", "cyclic adversary attacks naive only");
        break;
      case AdversaryKind::block:
        if (c.game != GameKind::lb) cfg.fail("adversary", "block attack needs game = lb");
        if (c.protocol != Protocol::seq) cfg.fail("protocol", "block attack targets seq");
        break;
      case AdversaryKind::pair:
        if (c.game != GameKind::pair) cfg.fail("adversary", "pair attack needs game = pair");
        if (c.honest != c.pair_first && c.honest != c.pair_second) {
          cfg.fail("honest", "pair attack needs the honest player in the pair");
        }
        if (c.protocol != Protocol::seq) cfg.fail("protocol", "pair attack targets seq");
        break;
      case AdversaryKind::dp:
        if (c.protocol != Protocol::seq) cfg.fail("protocol", "dp adversary targets seq");
        if (c.budget_kind != BudgetKind::known) cfg.fail("budget_kind", "dp adversary needs a known budget");
        if (c.stopping != StoppingKind::fixed && c.stopping != StoppingKind::known_budget) {
          cfg.fail("stopping", "dp adversary needs a planned sample count");
        }
        break;
      default:
        break;
    }
  }

  if (command == Command::min_samples) {
    if (cfg.has("max_samples")) {
      c.max_samples = static_cast<std::uint64_t>(cfg.get_int("max_samples", 1, 1, kCountMax));
    }
    if (cfg.has("verify_window")) {
      c.verify_window = static_cast<std::uint64_t>(cfg.get_int("verify_window", 0, 0, kCountMax));
    }
    c.sweep = cfg.get_choice("sweep", "", {"", "n", "budget", "eps"});
    c.sweep_values = cfg.get_list("sweep_values");
    if (c.sweep.empty() != c.sweep_values.empty()) {
      cfg.fail(c.sweep.empty() ? "sweep_values" : "sweep", "sweep and sweep_values go together");
    }
    for (const auto& v : c.sweep_values) {
      Config probe;
      probe.set("value", v, cfg.find("sweep_values")->source, cfg.find("sweep_values")->line);
      if (c.sweep == "eps") probe.get_double("value", 0, 0.0, 1.0, true, true);
      else probe.get_int("value", 0, c.sweep == "n" ? 1 : 0, kIntMax);
    }
  }
  return c;
}

GamePtr build_game(const ExperimentConfig& c) {
  GamePtr game;
  try {
    switch (c.game) {
      case GameKind::lb: game = make_lb_game(c.n); break;
      case GameKind::pair: game = make_pair_game(c.n, c.pair_first, c.pair_second); break;
      case GameKind::max_gamma: game = make_max_gamma_game(c.n); break;
      case GameKind::synergy:
        game = make_synergy_game(load_hypergraph(c.hypergraph).with_padding(c.padding));
        break;
    }
  } catch (const ParseError& e) {
    throw ConfigError("hypergraph", e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.game == GameKind::synergy ? "hypergraph" : "n", e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError("hypergraph", e.what());
  }
  if (c.honest >= game->size()) {
    throw ConfigError("honest", "must be below n = " + std::to_string(game->size()));
  }
  return game;
}

double resolve_gamma(const ExperimentConfig& c, const Game& game) {
  if (c.gamma) return *c.gamma;
  if (!game.closed_form() && game.size() > kMaxExactPlayers) {
    throw ConfigError("gamma", "no exact max-to-mean ratio for this game; set gamma explicitly");
  }
  return shapley_exact(game).gamma;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& c, const GamePtr& game) {
  const double gamma = needs_gamma(c) ? resolve_gamma(c, *game) : 1.0;
  const StoppingRule rule = make_rule(c, gamma);
  gate(c, planned_samples(c, rule, gamma) * static_cast<double>(c.runs) * game->size(),
       kDeskSimulationWork, std::string(command_name(c.command)));

  if (c.adversary == AdversaryKind::dp) {
    const auto rows = static_cast<double>(*rule.planned_samples());
    gate(c, dp_work(*game, c.honest, static_cast<int>(c.budget), rows, c.memory_cap), kDeskDpWork,
         "dp adversary table");
    DpSimConfig sim;
    sim.game = game;
    sim.honest = c.honest;
    sim.stopping = rule;
    sim.budget = static_cast<int>(c.budget);
    sim.runs = c.runs;
    sim.seed = c.seed;
    sim.punish = c.punish;
    sim.record_samples = !c.samples_output.empty();
    sim.jobs = c.jobs;
    sim.memory_cap = c.memory_cap;
    return dp_two_pass(sim).runs;
  }

  std::vector<RunRecord> runs(c.runs);
  parallel_for(c.runs, c.jobs, [&](std::size_t m) {
    RunOptions o;
    o.protocol = c.protocol;
    o.punish = c.punish;
    o.honest = {c.honest};
    o.seed = derive_seed(c.seed, "run", m);
    o.hard_cap = c.hard_cap;
    o.record_samples = !c.samples_output.empty();
    runs[m] = run_allocation(game, make_adversary(c, game), make_budget(c), rule, o);
  });
  return runs;
}

void cmd_shapley(const ExperimentConfig& c, std::ostream& out) {
  const GamePtr game = build_game(c);
  ShapleyReport report;
  try {
    report = shapley_exact(*game);
  } catch (const std::length_error& e) {
    throw ConfigError(c.game == GameKind::synergy ? "hypergraph" : "n", e.what());
  }
  CsvWriter csv(out);
  csv.meta("command", "shapley");
  csv.meta("game", game->describe());
  csv.meta("gamma", format_number(report.gamma));
  csv.header({"player", "phi", "gamma", "u_max"});
  for (int i = 0; i < game->size(); ++i) {
    csv.row({std::int64_t{i}, report.phi[i], report.gamma_per_player[i], report.u_max[i]});
  }
}

std::vector<RunRecord> cmd_simulate(const ExperimentConfig& c, std::ostream& out) {
  const GamePtr game = build_game(c);
  auto runs = run_experiment(c, game);
  const auto phi = honest_phi(*game, c.honest);

  CsvWriter csv(out);
  write_game_meta(csv, c, *game);
  csv.meta("adversary", adversary_text(c.adversary));
  csv.meta("protocol", c.protocol == Protocol::seq ? "seq" : "naive");
  csv.meta("budget", budget_text(c));
  csv.meta("seed", std::to_string(c.seed));
  csv.header({"run", "seed", "samples_used", "violations", "violating_samples", "budget_used",
              "epsilon_hat", "x_honest"});
  std::vector<double> xs;
  double eps_hat_max = 0.0;
  for (std::size_t m = 0; m < runs.size(); ++m) {
    const auto& r = runs[m];
    csv.row({std::uint64_t{m}, r.seed, r.samples_used, r.violations, r.violating_samples,
             r.budget_used, r.epsilon_hat, r.honest_x()});
    xs.push_back(r.honest_x());
    eps_hat_max = std::max(eps_hat_max, r.epsilon_hat);
  }
  const auto est = summarize(xs);
  csv.trailer("phi_honest", phi ? format_number(*phi) : "unknown");
  csv.trailer("mean_x_honest", format_number(est.mean));
  csv.trailer("std_error", format_number(est.std_error));
  csv.trailer("epsilon_hat_max", format_number(eps_hat_max));

  if (!c.samples_output.empty()) {
    auto file = open_output(c.samples_output);
    CsvWriter detail(file);
    detail.meta("command", "simulate-samples");
    detail.header({"run", "sample", "y", "z", "x", "dev"});
    for (std::size_t m = 0; m < runs.size(); ++m) {
      for (std::size_t j = 0; j < runs[m].per_sample.size(); ++j) {
        const auto& s = runs[m].per_sample[j];
        detail.row({std::uint64_t{m}, std::uint64_t{j}, s.y, s.z, s.y - s.z, s.dev});
      }
    }
  }
  return runs;
}

MinSamplesResult find_min_samples(const Game& game, Player honest, int budget, double eps,
                                  std::uint64_t max_samples, std::uint64_t window,
                                  std::size_t memory_cap) {
  const auto phi = honest_phi(game, honest);
  if (!phi) throw ConfigError("n", "min-samples needs an exact Shapley value for the honest player");
  DPTable table = DPTable::for_game(game, honest, budget, memory_cap);
  MinSamplesResult res;
  res.phi = *phi;
  const double target = (1.0 - eps) * *phi;
  const double tol = 1e-12 * std::max(1.0, std::abs(target));
  auto value_at = [&](std::uint64_t r) {
    table.extend_to(r);
    const double v = table.boundary(r - 1, budget) / static_cast<double>(r);
    res.per_sample_value.push_back(v);
    res.scanned = r;
    return v;
  };
  for (std::uint64_t r = 1; r <= max_samples; ++r) {
    if (value_at(r) >= target - tol) {
      res.crossed = true;
      res.samples = r;
      break;
    }
  }
  if (!res.crossed) return res;
  res.verified = true;
  for (std::uint64_t r = res.samples + 1; r <= res.samples + window; ++r) {
    if (value_at(r) < target - tol) res.verified = false;
  }
  return res;
}

std::vector<MinSamplesResult> cmd_min_samples(const ExperimentConfig& c, std::ostream& out) {
  struct Point {
    ExperimentConfig cfg;
    std::string value;
  };
  std::vector<Point> points;
  if (c.sweep.empty()) {
    points.push_back({c, ""});
  } else {
    int base_vertices = 0;
    if (c.sweep == "n" && c.game == GameKind::synergy) {
      base_vertices = load_hypergraph(c.hypergraph).vertex_count();
    }
    for (const auto& v : c.sweep_values) {
      Point p{c, v};
      if (c.sweep == "eps") {
        p.cfg.eps = std::stod(v);
      } else if (c.sweep == "budget") {
        p.cfg.budget = std::stoll(v);
      } else if (c.game == GameKind::synergy) {
        p.cfg.padding = std::stoi(v) - base_vertices;
        if (p.cfg.padding < 0) {
          throw ConfigError("sweep_values", "n = " + v + " is below the hypergraph's " +
                                                std::to_string(base_vertices) + " vertices");
        }
      } else {
        p.cfg.n = std::stoi(v);
      }
      points.push_back(std::move(p));
    }
  }

  struct Planned {
    GamePtr game;
    std::uint64_t max_samples = 0;
    std::uint64_t window = 0;
  };
  std::vector<Planned> plans;
  for (const auto& p : points) {
    Planned plan;
    plan.game = build_game(p.cfg);
    if (p.cfg.max_samples) {
      plan.max_samples = *p.cfg.max_samples;
    } else {
      // The c*U_max lower bound on the table guarantees a crossing by Gamma*C/eps.
      const double gamma = resolve_gamma(p.cfg, *plan.game);
      plan.max_samples = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::ceil(gamma * p.cfg.budget / p.cfg.eps - 1e-9)));
    }
    plan.window = p.cfg.verify_window.value_or(plan.max_samples);
    gate(p.cfg,
         dp_work(*plan.game, p.cfg.honest, static_cast<int>(p.cfg.budget),
                 static_cast<double>(plan.max_samples + plan.window), p.cfg.memory_cap),
         kDeskDpWork, "min-samples scan");
    plans.push_back(std::move(plan));
  }

  std::vector<MinSamplesResult> results(points.size());
  parallel_for(points.size(), c.jobs, [&](std::size_t i) {
    const auto& cfg = points[i].cfg;
    results[i] = find_min_samples(*plans[i].game, cfg.honest, static_cast<int>(cfg.budget), cfg.eps,
                                  plans[i].max_samples, plans[i].window, cfg.memory_cap);
  });

  CsvWriter csv(out);
  write_game_meta(csv, c, *plans.front().game);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].crossed) continue;
    csv.meta("status", "search range exhausted");
    csv.meta("sweep_value", points[i].value.empty() ? "-" : points[i].value);
    csv.meta("target", format_number((1.0 - points[i].cfg.eps) * results[i].phi));
    csv.header({"R", "E_worst", "per_sample"});
    for (std::size_t r = 0; r < results[i].per_sample_value.size(); ++r) {
      const double per = results[i].per_sample_value[r];
      csv.row({std::uint64_t{r + 1}, per * static_cast<double>(r + 1), per});
    }
    throw SearchExhausted("no R <= " + std::to_string(plans[i].max_samples) +
                          " reaches (1 - eps) * phi; scanned values written to the output");
  }
  csv.header({"sweep", "value", "n", "budget", "eps", "R", "verified", "per_sample_value", "phi"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& cfg = points[i].cfg;
    const auto& r = results[i];
    csv.row({c.sweep.empty() ? std::string("none") : c.sweep,
             points[i].value.empty() ? std::string("-") : points[i].value,
             std::int64_t{plans[i].game->size()}, cfg.budget, cfg.eps, r.samples,
             std::int64_t{r.verified ? 1 : 0}, r.per_sample_value[r.samples - 1], r.phi});
  }
  return results;
}

CdfSummary cmd_cdf(const ExperimentConfig& c, std::ostream& out) {
  const GamePtr game = build_game(c);
  const auto phi = honest_phi(*game, c.honest);
  if (!phi || !(*phi > 0.0)) {
    throw ConfigError("honest", "cdf needs a positive exact Shapley value for the honest player");
  }
  const auto runs = run_experiment(c, game);

  CdfSummary s;
  s.phi = *phi;
  for (const auto& r : runs) s.sorted_eps_hat.push_back(std::max(0.0, 1.0 - r.honest_x() / *phi));
  std::sort(s.sorted_eps_hat.begin(), s.sorted_eps_hat.end());
  const auto m = static_cast<double>(runs.size());
  const auto at_or_below =
      std::upper_bound(s.sorted_eps_hat.begin(), s.sorted_eps_hat.end(), c.eps) - s.sorted_eps_hat.begin();
  s.cdf_at_eps = static_cast<double>(at_or_below) / m;
  s.fraction_above_eps = 1.0 - s.cdf_at_eps;
  s.point_right_of_curve = s.cdf_at_eps >= 1.0 - c.delta;

  CsvWriter csv(out);
  write_game_meta(csv, c, *game);
  csv.meta("adversary", adversary_text(c.adversary));
  csv.meta("budget", budget_text(c));
  csv.meta("runs", std::to_string(runs.size()));
  if (c.stopping == StoppingKind::fixed) {
    csv.meta("samples_per_run", std::to_string(c.samples));
  } else {
    csv.meta("stopping", c.stopping == StoppingKind::known_budget   ? "known-budget"
                         : c.stopping == StoppingKind::unknown_budget ? "unknown-budget"
                                                                      : "adaptive");
  }
  csv.meta("seed", std::to_string(c.seed));
  csv.header({"eps_hat", "cum_fraction"});
  for (std::size_t i = 0; i < s.sorted_eps_hat.size(); ++i) {
    csv.row({s.sorted_eps_hat[i], static_cast<double>(i + 1) / m});
  }
  csv.trailer("theoretical_point", format_number(c.eps) + "," + format_number(1.0 - c.delta));
  csv.trailer("cdf_at_eps", format_number(s.cdf_at_eps));
  csv.trailer("fraction_above_eps", format_number(s.fraction_above_eps));
  csv.trailer("point_right_of_curve", s.point_right_of_curve ? "yes" : "no");
  return s;
}

void cmd_dp_table(const ExperimentConfig& c, std::ostream& out) {
  const GamePtr game = build_game(c);
  const int budget = static_cast<int>(c.budget);
  gate(c, dp_work(*game, c.honest, budget, static_cast<double>(c.samples), c.memory_cap),
       kDeskDpWork, "dp-table");
  DPTable table = DPTable::for_game(*game, c.honest, budget, c.memory_cap);
  table.extend_to(c.samples);
  CsvWriter csv(out);
  write_game_meta(csv, c, *game);
  csv.meta("states", std::to_string(table.states().state_count()));
  csv.header({"T", "c", "E_worst"});
  for (std::size_t t = 0; t < table.rows(); ++t) {
    for (int b = 0; b <= budget; ++b) csv.row({std::uint64_t{t}, std::int64_t{b}, table.boundary(t, b)});
  }
}

}  // namespace shapsec
