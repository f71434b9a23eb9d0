#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "marksman/action_grid.hpp"
#include "marksman/reward_shaping.hpp"
#include "marksman/rng.hpp"
#include "marksman/state_codec.hpp"

namespace marksman {

struct AgentConfig {
  double alpha = 0.7;    // learning rate
  double gamma = 0.5;    // discount
  double lambda = 0.9;   // trace decay
  double epsilon_initial = 0.20;
  double epsilon_step = 0.03;   // subtracted per 100 deaths
  double epsilon_floor = 0.05;
  int epsilon_step_deaths = 100;
  double hit_reward = 250.0;
  double miss_penalty = -1.0;
  int pas_interval = 3;  // ticks per persisted action; 1 disables PAS
  bool pcwr_enabled = false;

  RewardConfig reward_config() const {
    return {hit_reward, miss_penalty, pcwr_enabled};
  }

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

// Dense state x action value table, zero-initialized.
class QTable {
 public:
  QTable(int states = kStateCount, int actions = kActionCount);

  int states() const { return states_; }
  int actions() const { return actions_; }

  double& at(int state, int action) {
    return values_[static_cast<std::size_t>(state) * actions_ + action];
  }
  double at(int state, int action) const {
    return values_[static_cast<std::size_t>(state) * actions_ + action];
  }
  std::span<const double> row(int state) const {
    return {values_.data() + static_cast<std::size_t>(state) * actions_,
            static_cast<std::size_t>(actions_)};
  }
  std::span<const double> raw() const { return values_; }

  bool operator==(const QTable&) const = default;

 private:
  friend class TraceTable;
  int states_;
  int actions_;
  std::vector<double> values_;
};

// Replacing eligibility traces. Entries touched since the last reset are
// tracked so decay sweeps cost O(touched) instead of O(table); arithmetic
// is identical to a dense sweep because untouched entries are exactly zero
// and every per-entry update is independent.
class TraceTable {
 public:
  TraceTable(int states = kStateCount, int actions = kActionCount);

  int states() const { return states_; }
  int actions() const { return actions_; }

  double at(int state, int action) const {
    return values_[static_cast<std::size_t>(state) * actions_ + action];
  }

  // Zeroes every trace; called at each shooting-period start.
  void reset();

  // Replacing trace: sets the entry to 1.
  void set_replacing(int state, int action);

  // Q += alpha * delta * E over all entries, then E *= decay.
  void apply_and_decay(QTable& q, double alpha_delta, double decay);

  std::span<const std::size_t> touched() const { return touched_; }

 private:
  int states_;
  int actions_;
  std::vector<double> values_;
  std::vector<std::size_t> touched_;
};

// Exploration schedule: epsilon_initial reduced by epsilon_step every
// epsilon_step_deaths deaths, never below epsilon_floor. Rates are
// quantized to 0.01% so the floor is reached exactly.
double epsilon_for_deaths(std::int64_t death_count, const AgentConfig& cfg);

// Epsilon-greedy over one Q row. Argmax ties break uniformly at random,
// never by index. Returns the chosen column.
int select_action(std::span<const double> q_row, double epsilon, Rng& rng);

// One SARSA(lambda) update with replacing traces:
//   delta = r + (terminal ? 0 : gamma * Q[s', a']) - Q[s, a]
//   E[s, a] = 1;  Q += alpha * delta * E;  E *= gamma * lambda
void sarsa_step_update(QTable& q, TraceTable& e, int state, int action,
                       double reward, int next_state, int next_action,
                       bool terminal, const AgentConfig& cfg);

// Replays a completed shooting period as ordered SARSA(lambda) updates:
// resets traces, then one step update per logged step. The final step is
// terminal when the period ended with a death (either avatar's); otherwise
// `bootstrap` must carry the next period's initial (state, action) pair.
// Throws std::invalid_argument on a rewards-length mismatch or a missing
// bootstrap for a non-terminal period.
void apply_period_updates(QTable& q, TraceTable& e,
                          const ShootingPeriodLog& period,
                          std::span<const double> rewards, bool terminal,
                          std::optional<std::pair<int, int>> bootstrap,
                          const AgentConfig& cfg);

// Snapshot file: little-endian, magic "QTAB", format version u32, dims as
// u32 pair, then states*actions float64 values row-major.
void save_qtable(const std::filesystem::path& path, const QTable& q);
QTable load_qtable(const std::filesystem::path& path);

// CSV export: header then one (state_index, action_id, q_value) row per entry.
void export_qtable_csv(const std::filesystem::path& path, const QTable& q);

}  // namespace marksman
