#include "shapsec/dp_sim.hpp"

#include <memory>

#include "shapsec/adversary.hpp"

namespace shapsec {

namespace {

RunOptions options_for(const DpSimConfig& config, std::size_t m) {
  RunOptions o;
  o.protocol = Protocol::seq;
  o.punish = config.punish;
  o.honest = {config.honest};
  o.seed = derive_seed(config.seed, "run", m);
  o.record_samples = config.record_samples;
  o.record_transcript = config.record_transcript;
  return o;
}

StoppingRule rule_for(const DpSimConfig& config) {
  if (!config.game) throw std::invalid_argument("dp simulation needs a game");
  if (config.budget < 0) throw std::invalid_argument("dp simulation needs C >= 0");
  if (config.stopping) {
    if (!config.stopping->planned_samples()) {
      throw std::invalid_argument("dp simulation needs a stopping rule with a planned R");
    }
    return *config.stopping;
  }
  return StoppingRule::fixed(config.samples);
}

}  // namespace

DpSimResult dp_two_pass(const DpSimConfig& config) {
  const StoppingRule rule = rule_for(config);
  const std::uint64_t samples = *rule.planned_samples();
  auto table = std::make_shared<DPTable>(
      DPTable::for_game(*config.game, config.honest, config.budget, config.memory_cap));
  table->extend_to(samples);

  auto cache = std::make_shared<SliceCache>(table, false);
  std::vector<std::unique_ptr<AllocationRun>> runs;
  runs.reserve(config.runs);
  for (std::size_t m = 0; m < config.runs; ++m) {
    runs.push_back(std::make_unique<AllocationRun>(
        config.game, std::make_unique<DPAdversary>(cache, samples),
        Budget::known(config.budget), rule, options_for(config, m)));
  }
  for (std::uint64_t j = 0; j < samples; ++j) {
    cache->prepare(samples - 1 - j);
    parallel_for(runs.size(), config.jobs, [&](std::size_t m) { runs[m]->step(); });
  }

  DpSimResult result;
  result.runs.reserve(runs.size());
  for (auto& run : runs) result.runs.push_back(run->take_record());
  result.boundary_entries = table->boundary_entries();
  result.slice_builds = cache->builds();
  result.table_value =
      table->boundary(samples - 1, config.budget) / static_cast<double>(samples);
  return result;
}

DpSimResult dp_full_table(const DpSimConfig& config) {
  const StoppingRule rule = rule_for(config);
  const std::uint64_t samples = *rule.planned_samples();
  auto states = std::make_shared<const StateSpace>(*config.game, config.honest, std::nullopt,
                                                   config.memory_cap);
  auto full = std::make_shared<const FullDPTable>(states, config.budget, samples,
                                                  config.memory_cap);
  DpSimResult result;
  result.runs.resize(config.runs);
  parallel_for(config.runs, config.jobs, [&](std::size_t m) {
    result.runs[m] = run_allocation(config.game, std::make_unique<DPAdversary>(full, samples),
                                    Budget::known(config.budget),
                                    rule, options_for(config, m));
  });
  result.boundary_entries = samples * (static_cast<std::size_t>(config.budget) + 1);
  result.slice_builds = samples;
  result.table_value =
      full->boundary(samples - 1, config.budget) / static_cast<double>(samples);
  return result;
}

}  // namespace shapsec
