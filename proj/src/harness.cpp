#include "marksman/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "marksman/agent.hpp"
#include "marksman/botlink_transport.hpp"

namespace marksman {
namespace {

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::pair<std::string, std::uint16_t> parse_address(const std::string& addr) {
  const auto colon = addr.rfind(':');
  std::string host = "127.0.0.1";
  std::string port_str = addr;
  if (colon != std::string::npos) {
    if (colon > 0) host = addr.substr(0, colon);
    port_str = addr.substr(colon + 1);
  }
  const long port = port_str.empty() ? 0 : std::stol(port_str);
  if (port < 0 || port > 65535)
    throw std::invalid_argument("bad port in listen address: " + addr);
  return {host, static_cast<std::uint16_t>(port)};
}

// Cumulative selection counts over lives [1..upto].
SelectionCounts cumulative_selections(
    const std::vector<SelectionCounts>& per_life, std::size_t upto) {
  SelectionCounts total{};
  for (std::size_t i = 0; i < upto && i < per_life.size(); ++i)
    for (int a = 0; a < kActionCount; ++a) total[a] += per_life[i][a];
  return total;
}

}  // namespace

void RunConfig::validate() const {
  if (lives_target < 1) throw std::invalid_argument("lives must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("at least one seed required");
  if (pas_interval < 1) throw std::invalid_argument("pas interval must be >= 1");
  if (opponent_level < 1 || opponent_level > 5)
    throw std::invalid_argument("opponent level must be 1..5");
  if (snapshot_every < 0) throw std::invalid_argument("snapshot cadence < 0");
  if (fire_range <= 0.0) throw std::invalid_argument("fire range must be > 0");
}

std::string config_name(bool pcwr, int pas_interval) {
  return std::string("pcwr_") + (pcwr ? "on" : "off") + "_pas" +
         std::to_string(pas_interval);
}

std::filesystem::path resolve_out_root(const std::string& cli_out) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv("MARKSMAN_OUT"); env && *env) return env;
  return "out";
}

SimConfig make_sim_config(const RunConfig& cfg) {
  SimConfig sim;
  sim.opponent.level = cfg.opponent_level;
  return sim;
}

AgentConfig make_agent_config(const RunConfig& cfg) {
  AgentConfig agent;
  agent.pas_interval = cfg.pas_interval;
  agent.pcwr_enabled = cfg.pcwr;
  return agent;
}

SeedRunResult run_single(const RunConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::string name = config_name(cfg.pcwr, cfg.pas_interval);
  const std::filesystem::path dir =
      cfg.out_root / name / std::to_string(seed);
  std::filesystem::create_directories(dir);

  Rng base(seed);
  const std::uint64_t world_seed = base.next_u64();
  const std::uint64_t agent_seed = base.next_u64();

  const SimConfig sim = make_sim_config(cfg);

  LearnerOptions opts;
  opts.agent = make_agent_config(cfg);
  opts.fire_range = cfg.fire_range;
  opts.registration_grace = sim.weapon.registration_delay;
  opts.ground_truth_attribution = cfg.ground_truth_attribution;
  LearnerAgent agent(opts, agent_seed);

  agent.on_kill_or_death = [&](std::int64_t kd) {
    if (cfg.snapshot_every > 0 && kd % cfg.snapshot_every == 0)
      save_qtable(dir / ("qtab_" + std::to_string(kd) + ".bin"), agent.q());
  };

  SessionLimits limits;
  limits.lives_target = cfg.lives_target;
  limits.max_ticks = cfg.max_ticks > 0
                         ? cfg.max_ticks
                         : static_cast<std::int64_t>(cfg.lives_target) * 4000 +
                               100000;

  SeedRunResult result;
  result.seed = seed;
  result.dir = dir;

  if (cfg.listen_address.empty()) {
    CombatWorld world(sim, world_seed);
    result.ticks = drive_in_process(world, agent, limits);
  } else {
    const auto [host, port] = parse_address(cfg.listen_address);
    BotlinkServer server(host, port);
    std::exception_ptr server_error;
    std::thread server_thread([&] {
      try {
        const int fd = server.accept_connection();
        serve_session(fd, sim, world_seed, limits);
        close_fd(fd);
      } catch (...) {
        server_error = std::current_exception();
      }
    });
    try {
      const int fd = connect_to(host, server.port());
      drive_socket_client(fd, agent);
      close_fd(fd);
    } catch (...) {
      server_thread.join();
      throw;
    }
    server_thread.join();
    if (server_error) std::rethrow_exception(server_error);
  }

  const auto& lives = agent.lives();
  write_lives_csv(dir / "lives.csv", lives);
  write_selections_csv(dir / "selections.csv", agent.life_selections());
  write_periods_csv(dir / "periods.csv", agent.periods());

  if (!lives.empty()) {
    std::vector<std::optional<double>> acc;
    acc.reserve(lives.size());
    for (const auto& l : lives) acc.push_back(l.accuracy);
    write_buckets_csv(dir / "buckets.csv", bucket_accuracy(acc, 10), 10);

    const std::size_t early = std::max<std::size_t>(1, lives.size() / 10);
    for (std::size_t upto : {early, lives.size()}) {
      const auto counts = cumulative_selections(agent.life_selections(), upto);
      std::int64_t total = 0;
      for (auto c : counts) total += c;
      if (total > 0)
        write_heatmap_csv(dir / ("heatmap_" + std::to_string(upto) + ".csv"),
                          action_heatmap(counts));
      if (upto == lives.size()) break;  // avoid rewriting when early == all
    }
  }

  RunSummary s;
  s.config_name = name;
  s.seed = seed;
  s.lives = static_cast<int>(lives.size());
  std::int64_t hits = 0, misses = 0;
  double reward = 0.0, alive_s = 0.0;
  for (const auto& l : lives) {
    hits += l.hits;
    misses += l.misses;
    reward += l.reward_sum;
    alive_s += l.time_alive_s;
  }
  const double n = std::max<double>(1.0, static_cast<double>(lives.size()));
  s.avg_hits_per_life = static_cast<double>(hits) / n;
  s.avg_misses_per_life = static_cast<double>(misses) / n;
  s.avg_reward_per_life = reward / n;
  s.overall_accuracy =
      hits + misses > 0
          ? static_cast<double>(hits) / static_cast<double>(hits + misses)
          : 0.0;
  s.max_kill_streak = agent.max_kill_streak();
  s.kills = agent.kills();
  s.deaths = agent.deaths();
  s.final_kd = kd_ratio(s.kills, s.deaths);
  s.hours_alive = alive_s / 3600.0;
  write_summary_csv(dir / "summary.csv", s);

  result.summary = s;
  result.lives = lives;
  return result;
}

std::vector<SeedRunResult> run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const std::size_t jobs = cfg.seeds.size();
  std::vector<SeedRunResult> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);

  unsigned workers = cfg.threads > 0
                         ? static_cast<unsigned>(cfg.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs));

  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i)
      results[i] = run_single(cfg, cfg.seeds[i]);
    return results;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        results[i] = run_single(cfg, cfg.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

int report(const std::filesystem::path& root, std::ostream& out) {
  struct Group {
    std::vector<RunSummary> runs;
  };
  std::map<std::string, Group> groups;
  int found = 0;

  if (!std::filesystem::is_directory(root))
    throw std::runtime_error("not a directory: " + root.string());
  for (const auto& config_entry : std::filesystem::directory_iterator(root)) {
    if (!config_entry.is_directory()) continue;
    for (const auto& seed_entry :
         std::filesystem::directory_iterator(config_entry.path())) {
      if (!seed_entry.is_directory()) continue;
      const auto summary_path = seed_entry.path() / "summary.csv";
      if (!std::filesystem::exists(summary_path)) continue;
      groups[config_entry.path().filename().string()].runs.push_back(
          read_summary_csv(summary_path));
      ++found;
    }
  }

  const std::string header =
      "config,runs,hits_per_life,misses_per_life,reward_per_life,accuracy,"
      "kd_avg,kd_min,kd_max,max_streak_avg,hours_avg";
  std::string csv = header + "\n";

  char line[512];
  std::snprintf(line, sizeof line, "%-16s %5s %10s %12s %12s %9s %7s %7s %7s %11s %9s",
                "config", "runs", "hits/life", "misses/life", "reward/life",
                "accuracy", "kd_avg", "kd_min", "kd_max", "max_streak", "hours");
  out << line << '\n';

  for (const auto& [name, group] : groups) {
    double hits = 0, misses = 0, reward = 0, acc = 0, streak = 0, hours = 0;
    double kd_sum = 0, kd_min = std::numeric_limits<double>::infinity(),
           kd_max = -std::numeric_limits<double>::infinity();
    int kd_n = 0;
    for (const auto& r : group.runs) {
      hits += r.avg_hits_per_life;
      misses += r.avg_misses_per_life;
      reward += r.avg_reward_per_life;
      acc += r.overall_accuracy;
      streak += r.max_kill_streak;
      hours += r.hours_alive;
      if (std::isfinite(r.final_kd)) {
        kd_sum += r.final_kd;
        kd_min = std::min(kd_min, r.final_kd);
        kd_max = std::max(kd_max, r.final_kd);
        ++kd_n;
      }
    }
    const double n = static_cast<double>(group.runs.size());
    const double kd_avg = kd_n > 0 ? kd_sum / kd_n : 0.0;
    if (kd_n == 0) {
      kd_min = 0.0;
      kd_max = 0.0;
    }
    std::snprintf(line, sizeof line,
                  "%-16s %5zu %10.2f %12.2f %12.1f %9.4f %7.2f %7.2f %7.2f %11.1f %9.2f",
                  name.c_str(), group.runs.size(), hits / n, misses / n,
                  reward / n, acc / n, kd_avg, kd_min, kd_max, streak / n,
                  hours / n);
    out << line << '\n';

    csv += name + ',' + std::to_string(group.runs.size()) + ',' +
           fmt(hits / n) + ',' + fmt(misses / n) + ',' + fmt(reward / n) +
           ',' + fmt(acc / n) + ',' + fmt(kd_avg) + ',' + fmt(kd_min) + ',' +
           fmt(kd_max) + ',' + fmt(streak / n) + ',' + fmt(hours / n) + '\n';
  }

  std::ofstream csv_out(root / "tables.csv", std::ios::binary);
  if (!csv_out)
    throw std::runtime_error("cannot write " + (root / "tables.csv").string());
  csv_out << csv;
  return found;
}

}  // namespace marksman
