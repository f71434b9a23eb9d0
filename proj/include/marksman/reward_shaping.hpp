#pragma once

#include <cstdint>
#include <vector>

#include "marksman/action_grid.hpp"
#include "marksman/state_codec.hpp"

namespace marksman {

enum class Outcome : std::uint8_t { Miss = 0, Hit = 1 };

struct PeriodStep {
  StateKey state;
  AimAction action;
  Outcome outcome = Outcome::Miss;
  std::int64_t tick = 0;
};

// Ordered per-tick record of one trigger-held-to-release span. Ticks are
// strictly increasing; one entry per firing tick.
struct ShootingPeriodLog {
  std::vector<PeriodStep> steps;

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
};

struct RewardConfig {
  double hit_reward = 250.0;
  double miss_penalty = -1.0;
  bool pcwr_enabled = false;
};

// Plain mode: every Hit earns hit_reward, every Miss earns miss_penalty.
// Throws std::invalid_argument for an empty period.
std::vector<double> plain_rewards(const ShootingPeriodLog& period,
                                  const RewardConfig& cfg);

// Cluster-weighted mode: misses keep the plain penalty; maximal runs of
// consecutive hits are weighted by position. A standalone hit earns half
// the reward, the two endpoint hits of a run earn the full reward, and
// interior hits earn double. Period boundaries delimit runs exactly like
// misses. Throws std::invalid_argument for an empty period.
std::vector<double> pcwr_rewards(const ShootingPeriodLog& period,
                                 const RewardConfig& cfg);

// Dispatches on cfg.pcwr_enabled.
std::vector<double> shape(const ShootingPeriodLog& period,
                          const RewardConfig& cfg);

}  // namespace marksman
