#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shapsec/dp.hpp"
#include "shapsec/runner.hpp"

namespace shapsec {

struct DpSimConfig {
  GamePtr game;
  Player honest = 0;
  std::uint64_t samples = 1;   // R, unless `stopping` is set
  std::optional<StoppingRule> stopping;  // must plan its sample count in advance
  int budget = 0;              // C, a known budget
  std::size_t runs = 1;        // M
  std::uint64_t seed = 0;      // run m uses derive_seed(seed, "run", m)
  Punishment punish = Punishment::count_only;
  bool record_samples = false;
  bool record_transcript = false;
  std::size_t jobs = 1;
  std::size_t memory_cap = kDefaultDpMemoryCap;
};

struct DpSimResult {
  std::vector<RunRecord> runs;
  std::size_t boundary_entries = 0;
  std::size_t slice_builds = 0;
  double table_value = 0.0;  // E_worst[R-1][N][C] / R
};

// Pass 1 stores only the boundary rows; pass 2 walks T = R-1 down to 0,
// rebuilding each inner slice once and advancing all M runs through that
// P-sample together.
DpSimResult dp_two_pass(const DpSimConfig& config);

// Reference: every slice kept in memory, each run simulated on its own.
DpSimResult dp_full_table(const DpSimConfig& config);

}  // namespace shapsec
