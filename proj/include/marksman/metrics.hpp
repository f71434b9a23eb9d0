#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "marksman/action_grid.hpp"

namespace marksman {

struct LifeMetrics {
  int life_index = 0;  // 1-based
  std::int64_t hits = 0;
  std::int64_t misses = 0;
  double reward_sum = 0.0;
  std::optional<double> accuracy;  // empty when the life never fired
  double time_alive_s = 0.0;       // simulated
  std::int64_t kills_during_life = 0;
  double epsilon_in_effect = 0.0;  // at life start
};

// One completed shooting period, kept so reward accounting can be replayed
// from the outcome string alone.
struct PeriodRecord {
  int life_index = 0;
  std::string outcomes;  // 'H' / 'M' per firing tick
  double plain_sum = 0.0;
  double shaped_sum = 0.0;
};

using SelectionCounts = std::array<std::int64_t, kActionCount>;

// Mean of per-life accuracy over consecutive windows of `bucket` lives.
// Lives that never fired are skipped; the final partial window averages
// over its actual size; a window with no firing lives yields 0. Throws
// std::invalid_argument on an empty series or bucket < 1.
std::vector<double> bucket_accuracy(
    const std::vector<std::optional<double>>& per_life_accuracy,
    int bucket = 10);

// Selection percentages by action id (4 rows x 11 columns flattened
// row-major); sums to 100. Throws std::invalid_argument when no
// selections were made.
std::array<double, kActionCount> action_heatmap(const SelectionCounts& counts);

// Shannon entropy (bits) of the selection distribution. Throws
// std::invalid_argument when no selections were made.
double selection_entropy(const SelectionCounts& counts);

// kills / deaths; deaths == 0 yields +infinity (callers exclude it from
// averages).
double kd_ratio(std::int64_t kills, std::int64_t deaths);

struct RunSummary {
  std::string config_name;
  std::uint64_t seed = 0;
  int lives = 0;
  double avg_hits_per_life = 0.0;
  double avg_misses_per_life = 0.0;
  double avg_reward_per_life = 0.0;
  double overall_accuracy = 0.0;  // total hits / total shots
  int max_kill_streak = 0;
  std::int64_t kills = 0;
  std::int64_t deaths = 0;
  double final_kd = 0.0;
  double hours_alive = 0.0;  // simulated, sum of life times / 3600
};

// Deterministic CSV emitters (fixed headers, %.6f floats, '\n' endings).
void write_lives_csv(const std::filesystem::path& path,
                     const std::vector<LifeMetrics>& lives);
void write_buckets_csv(const std::filesystem::path& path,
                       const std::vector<double>& buckets, int bucket_size);
void write_selections_csv(const std::filesystem::path& path,
                          const std::vector<SelectionCounts>& per_life);
void write_periods_csv(const std::filesystem::path& path,
                       const std::vector<PeriodRecord>& periods);
void write_heatmap_csv(const std::filesystem::path& path,
                       const std::array<double, kActionCount>& grid);
void write_summary_csv(const std::filesystem::path& path,
                       const RunSummary& summary);

std::vector<LifeMetrics> read_lives_csv(const std::filesystem::path& path);
RunSummary read_summary_csv(const std::filesystem::path& path);

}  // namespace marksman
