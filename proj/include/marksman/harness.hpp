#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "marksman/combat_sim.hpp"
#include "marksman/metrics.hpp"
#include "marksman/rl_core.hpp"

namespace marksman {

struct RunConfig {
  bool pcwr = false;
  int pas_interval = 1;          // 1 disables persistence
  int lives_target = 200;        // quick default; the full study uses 1500
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int opponent_level = 3;
  std::filesystem::path out_root = "out";
  int snapshot_every = 25;       // kill-or-death cadence; 0 disables
  double fire_range = 1200.0;
  std::int64_t max_ticks = 0;    // 0 = derived from lives_target
  int threads = 0;               // 0 = one per seed, capped by hardware
  bool ground_truth_attribution = false;  // diagnostic
  // Socket transport: when set, each seed run is served over a local TCP
  // session instead of in-process calls. "host:port"; port 0 = ephemeral.
  std::string listen_address;

  void validate() const;  // throws std::invalid_argument
};

// "pcwr_on_pas3", "pcwr_off_pas1", ...
std::string config_name(bool pcwr, int pas_interval);

// Resolves the output root: --out wins, else $MARKSMAN_OUT, else "out".
std::filesystem::path resolve_out_root(const std::string& cli_out);

SimConfig make_sim_config(const RunConfig& cfg);
AgentConfig make_agent_config(const RunConfig& cfg);

struct SeedRunResult {
  std::uint64_t seed = 0;
  RunSummary summary;
  std::vector<LifeMetrics> lives;
  std::filesystem::path dir;
  std::int64_t ticks = 0;
};

// Runs one seed to lives_target deaths and writes lives.csv, summary.csv,
// buckets.csv, selections.csv, periods.csv, heatmap_<life>.csv and
// qtab_<n>.bin snapshots under <out_root>/<config>/<seed>/.
SeedRunResult run_single(const RunConfig& cfg, std::uint64_t seed);

// All seeds of one config, fanned out over a small worker pool.
std::vector<SeedRunResult> run_experiment(const RunConfig& cfg);

// Aggregates every <config>/<seed>/summary.csv under root into a
// per-config comparison table: prints it and writes <root>/tables.csv.
// Returns the number of runs found.
int report(const std::filesystem::path& root, std::ostream& out);

}  // namespace marksman
