#include "marksman/reward_shaping.hpp"

#include <stdexcept>

namespace marksman {

std::vector<double> plain_rewards(const ShootingPeriodLog& period,
                                  const RewardConfig& cfg) {
  if (period.empty()) {
    throw std::invalid_argument("empty shooting period");
  }
  std::vector<double> rewards;
  rewards.reserve(period.size());
  for (const PeriodStep& step : period.steps) {
    rewards.push_back(step.outcome == Outcome::Hit ? cfg.hit_reward
                                                   : cfg.miss_penalty);
  }
  return rewards;
}

std::vector<double> pcwr_rewards(const ShootingPeriodLog& period,
                                 const RewardConfig& cfg) {
  if (period.empty()) {
    throw std::invalid_argument("empty shooting period");
  }
  const double full = cfg.hit_reward;
  const double half = cfg.hit_reward * 0.5;
  const double dbl = cfg.hit_reward * 2.0;

  const std::size_t n = period.size();
  std::vector<double> rewards(n, cfg.miss_penalty);

  std::size_t i = 0;
  while (i < n) {
    if (period.steps[i].outcome != Outcome::Hit) {
      ++i;
      continue;
    }
    std::size_t run_end = i;  // inclusive
    while (run_end + 1 < n &&
           period.steps[run_end + 1].outcome == Outcome::Hit) {
      ++run_end;
    }
    const std::size_t run_len = run_end - i + 1;
    if (run_len == 1) {
      rewards[i] = half;
    } else {
      // Endpoints of the run take the full reward, everything inside
      // doubles it. A length-2 run is two endpoints and no interior.
      rewards[i] = full;
      rewards[run_end] = full;
      for (std::size_t j = i + 1; j < run_end; ++j) rewards[j] = dbl;
    }
    i = run_end + 1;
  }
  return rewards;
}

std::vector<double> shape(const ShootingPeriodLog& period,
                          const RewardConfig& cfg) {
  return cfg.pcwr_enabled ? pcwr_rewards(period, cfg)
                          : plain_rewards(period, cfg);
}

}  // namespace marksman
