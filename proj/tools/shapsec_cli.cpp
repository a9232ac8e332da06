// Command-line driver: shapley, simulate, min-samples, cdf, dp-table.
//
// Exit codes: 0 success, 2 configuration error, 3 compute-cap abort, 1 other.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "shapsec/config.hpp"
#include "shapsec/experiments.hpp"
#include "shapsec/hypergraph.hpp"

namespace {

using namespace shapsec;

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;

// Flags that map one-to-one onto config keys. Applied after the config file.
const std::vector<std::pair<const char*, const char*>> kValueFlags = {
    {"--game", "game"},
    {"--n", "n"},
    {"--hypergraph", "hypergraph"},
    {"--padding", "padding"},
    {"--honest", "honest"},
    {"--pair-first", "pair_first"},
    {"--pair-second", "pair_second"},
    {"--gamma", "gamma"},
    {"--protocol", "protocol"},
    {"--adversary", "adversary"},
    {"--punish", "punish"},
    {"--budget-kind", "budget_kind"},
    {"--budget", "budget"},
    {"--rate", "rate"},
    {"--eps", "eps"},
    {"--delta", "delta"},
    {"--stopping", "stopping"},
    {"--samples", "samples"},
    {"--hard-cap", "hard_cap"},
    {"--runs", "runs"},
    {"--seed", "seed"},
    {"--jobs", "jobs"},
    {"--output", "output"},
    {"--samples-output", "samples_output"},
    {"--max-samples", "max_samples"},
    {"--verify-window", "verify_window"},
    {"--sweep", "sweep"},
    {"--sweep-values", "sweep_values"},
    {"--memory-cap-mib", "memory_cap_mib"},
};

struct Invocation {
  std::string config_file;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> values;
  bool full_scale = false;
  bool greedy = false;
};

void add_options(CLI::App& sub, Invocation& inv) {
  sub.add_option("--config", inv.config_file, "key = value configuration file");
  sub.add_option("--set", inv.assignments, "override a config key (key=value), repeatable");
  for (const auto& [flag, key] : kValueFlags) {
    sub.add_option(flag, inv.values[key], std::string("sets `") + key + "`");
  }
  sub.add_flag("--full-scale", inv.full_scale,
               "allow runs beyond desk scale (hours of compute; see README)");
  sub.add_flag("--greedy", inv.greedy, "block attack seizes every opportunity");
}

Config assemble(const CLI::App& sub, const Invocation& inv) {
  Config cfg = inv.config_file.empty() ? Config{} : Config::load(inv.config_file);
  for (const auto& [flag, key] : kValueFlags) {
    if (sub.count(flag) > 0) cfg.set(key, inv.values.at(key));
  }
  if (inv.full_scale) cfg.set("full_scale", "true");
  if (inv.greedy) cfg.set("greedy", "true");
  for (const auto& a : inv.assignments) cfg.set_assignment(a);
  return cfg;
}

std::string resolve_output(const ExperimentConfig& exp) {
  if (!exp.output.empty()) return exp.output;
  if (const char* dir = std::getenv("SHAPSEC_OUTPUT_DIR"); dir && *dir) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / (std::string(command_name(exp.command)) + ".csv")).string();
  }
  return {};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output", "cannot open `" + path + "` for writing");
  out << text;
}

int run(Command command, const CLI::App& sub, const Invocation& inv) {
  std::ostringstream buffer;
  std::string path;
  try {
    const ExperimentConfig exp = parse_experiment(assemble(sub, inv), command);
    path = resolve_output(exp);
    switch (command) {
      case Command::shapley: cmd_shapley(exp, buffer); break;
      case Command::simulate: cmd_simulate(exp, buffer); break;
      case Command::min_samples: cmd_min_samples(exp, buffer); break;
      case Command::cdf: cmd_cdf(exp, buffer); break;
      case Command::dp_table: cmd_dp_table(exp, buffer); break;
    }
    emit(path, buffer.str());
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "shapsec: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "shapsec: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SearchExhausted& e) {
    emit(path, buffer.str());
    std::cerr << "shapsec: compute cap: " << e.what() << '\n';
    return kExitCap;
  } catch (const ComputeCapExceeded& e) {
    std::cerr << "shapsec: compute cap: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::length_error& e) {
    std::cerr << "shapsec: compute cap: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "shapsec: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "shapsec: error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for Shapley-value allocation under a violation-bounded adversary"};
  app.require_subcommand(1);

  const std::vector<std::pair<Command, const char*>> commands = {
      {Command::shapley, "exact Shapley values, max-to-mean ratios and max marginals"},
      {Command::simulate, "run the allocation loop M times and report each run"},
      {Command::min_samples, "smallest R reaching expected maximin security against the optimal adversary"},
      {Command::cdf, "empirical CDF of the multiplicative error over M runs"},
      {Command::dp_table, "optimal-adversary boundary values E_worst[T][N][c]"},
  };
  std::vector<Invocation> invocations(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs.push_back(app.add_subcommand(command_name(commands[i].first), commands[i].second));
    add_options(*subs.back(), invocations[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (subs[i]->parsed()) return run(commands[i].first, *subs[i], invocations[i]);
  }
  return kExitOther;
}
