#include "marksman/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace marksman {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<double> bucket_accuracy(
    const std::vector<std::optional<double>>& per_life_accuracy, int bucket) {
  if (per_life_accuracy.empty())
    throw std::invalid_argument("bucket_accuracy: empty series");
  if (bucket < 1) throw std::invalid_argument("bucket_accuracy: bucket < 1");

  std::vector<double> out;
  const std::size_t n = per_life_accuracy.size();
  for (std::size_t start = 0; start < n; start += bucket) {
    const std::size_t end = std::min(n, start + static_cast<std::size_t>(bucket));
    double sum = 0.0;
    int counted = 0;
    for (std::size_t i = start; i < end; ++i) {
      if (per_life_accuracy[i]) {
        sum += *per_life_accuracy[i];
        ++counted;
      }
    }
    out.push_back(counted > 0 ? sum / counted : 0.0);
  }
  return out;
}

std::array<double, kActionCount> action_heatmap(const SelectionCounts& counts) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total <= 0) throw std::invalid_argument("action_heatmap: empty window");
  std::array<double, kActionCount> grid{};
  for (int i = 0; i < kActionCount; ++i)
    grid[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
  return grid;
}

double selection_entropy(const SelectionCounts& counts) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total <= 0) throw std::invalid_argument("selection_entropy: empty window");
  double h = 0.0;
  for (auto c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double kd_ratio(std::int64_t kills, std::int64_t deaths) {
  if (deaths == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(kills) / static_cast<double>(deaths);
}

void write_lives_csv(const std::filesystem::path& path,
                     const std::vector<LifeMetrics>& lives) {
  auto out = open_out(path);
  out << "life,hits,misses,reward_sum,accuracy,time_alive_s,kills,epsilon\n";
  for (const auto& l : lives) {
    out << l.life_index << ',' << l.hits << ',' << l.misses << ','
        << fmt(l.reward_sum) << ',' << (l.accuracy ? fmt(*l.accuracy) : "")
        << ',' << fmt(l.time_alive_s) << ',' << l.kills_during_life << ','
        << fmt(l.epsilon_in_effect) << '\n';
  }
}

void write_buckets_csv(const std::filesystem::path& path,
                       const std::vector<double>& buckets, int bucket_size) {
  auto out = open_out(path);
  out << "bucket,first_life,last_life,mean_accuracy\n";
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const std::size_t first = i * bucket_size + 1;
    const std::size_t last = first + bucket_size - 1;
    out << (i + 1) << ',' << first << ',' << last << ',' << fmt(buckets[i])
        << '\n';
  }
}

void write_selections_csv(const std::filesystem::path& path,
                          const std::vector<SelectionCounts>& per_life) {
  auto out = open_out(path);
  out << "life";
  for (int a = 0; a < kActionCount; ++a) out << ",a" << a;
  out << '\n';
  for (std::size_t i = 0; i < per_life.size(); ++i) {
    out << (i + 1);
    for (int a = 0; a < kActionCount; ++a) out << ',' << per_life[i][a];
    out << '\n';
  }
}

void write_periods_csv(const std::filesystem::path& path,
                       const std::vector<PeriodRecord>& periods) {
  auto out = open_out(path);
  out << "life,outcomes,plain_sum,shaped_sum\n";
  for (const auto& p : periods) {
    out << p.life_index << ',' << p.outcomes << ',' << fmt(p.plain_sum) << ','
        << fmt(p.shaped_sum) << '\n';
  }
}

void write_heatmap_csv(const std::filesystem::path& path,
                       const std::array<double, kActionCount>& grid) {
  auto out = open_out(path);
  out << "dz\\dx";
  for (int x = 0; x < kActionGridWidth; ++x)
    out << ',' << fmt(-kLateralOffsetMax + x * kLateralOffsetStep);
  out << '\n';
  for (int z = 0; z < kActionGridHeight; ++z) {
    out << fmt(kVerticalOffsets[z]);
    for (int x = 0; x < kActionGridWidth; ++x)
      out << ',' << fmt(grid[z * kActionGridWidth + x]);
    out << '\n';
  }
}

void write_summary_csv(const std::filesystem::path& path,
                       const RunSummary& s) {
  auto out = open_out(path);
  out << "config,seed,lives,avg_hits,avg_misses,avg_reward,overall_accuracy,"
         "max_kill_streak,kills,deaths,final_kd,hours_alive\n";
  out << s.config_name << ',' << s.seed << ',' << s.lives << ','
      << fmt(s.avg_hits_per_life) << ',' << fmt(s.avg_misses_per_life) << ','
      << fmt(s.avg_reward_per_life) << ',' << fmt(s.overall_accuracy) << ','
      << s.max_kill_streak << ',' << s.kills << ',' << s.deaths << ','
      << fmt(s.final_kd) << ',' << fmt(s.hours_alive) << '\n';
}

std::vector<LifeMetrics> read_lives_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("life,hits,misses", 0) != 0)
    throw std::runtime_error("bad lives.csv header in " + path.string());
  std::vector<LifeMetrics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 8)
      throw std::runtime_error("bad lives.csv row in " + path.string());
    LifeMetrics l;
    l.life_index = std::stoi(cols[0]);
    l.hits = std::stoll(cols[1]);
    l.misses = std::stoll(cols[2]);
    l.reward_sum = std::stod(cols[3]);
    if (!cols[4].empty()) l.accuracy = std::stod(cols[4]);
    l.time_alive_s = std::stod(cols[5]);
    l.kills_during_life = std::stoll(cols[6]);
    l.epsilon_in_effect = std::stod(cols[7]);
    out.push_back(l);
  }
  return out;
}

RunSummary read_summary_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header, line;
  if (!std::getline(in, header) || header.rfind("config,seed", 0) != 0)
    throw std::runtime_error("bad summary.csv header in " + path.string());
  if (!std::getline(in, line))
    throw std::runtime_error("summary.csv missing data row: " + path.string());
  const auto cols = split_csv(line);
  if (cols.size() != 12)
    throw std::runtime_error("bad summary.csv row in " + path.string());
  RunSummary s;
  s.config_name = cols[0];
  s.seed = std::stoull(cols[1]);
  s.lives = std::stoi(cols[2]);
  s.avg_hits_per_life = std::stod(cols[3]);
  s.avg_misses_per_life = std::stod(cols[4]);
  s.avg_reward_per_life = std::stod(cols[5]);
  s.overall_accuracy = std::stod(cols[6]);
  s.max_kill_streak = std::stoi(cols[7]);
  s.kills = std::stoll(cols[8]);
  s.deaths = std::stoll(cols[9]);
  s.final_kd = std::stod(cols[10]);
  s.hours_alive = std::stod(cols[11]);
  return s;
}

}  // namespace marksman
