// marksman: headless FPS-duel trainer. A tabular SARSA(lambda) agent
// learns where to aim an assault-rifle burst from damage feedback alone,
// with optional cluster-weighted rewarding and persistent action
// selection. `run` trains one configuration across seeds; `report`
// aggregates finished runs into a comparison table.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "marksman/harness.hpp"
#include "marksman/metrics.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) seeds.push_back(std::stoull(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return seeds;
}

std::string fmt_kd(double kd) {
  if (!std::isfinite(kd)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", kd);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Headless FPS duel trainer: SARSA(lambda) weapon-aiming agent"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Train one configuration");
  std::string pcwr = "off";
  run->add_option("--pcwr", pcwr, "Cluster-weighted rewarding (on|off)")
      ->check(CLI::IsMember({"on", "off"}));
  int pas = 1;
  run->add_option("--pas", pas, "Action persistence interval (1=off, 3=on)")
      ->check(CLI::IsMember({1, 3}));
  int lives = 200;
  auto* lives_opt =
      run->add_option("--lives", lives, "Deaths per run (default 200)")
          ->check(CLI::PositiveNumber);
  std::string seeds_csv = "1,2,3";
  auto* seeds_opt =
      run->add_option("--seeds", seeds_csv, "Comma-separated seed list");
  int level = 3;
  run->add_option("--level", level, "Opponent level 1..5 (default 3)")
      ->check(CLI::Range(1, 5));
  std::string out;
  run->add_option("--out", out,
                  "Output root (default $MARKSMAN_OUT, then ./out)");
  std::string listen;
  run->add_option("--listen", listen,
                  "Serve each run over TCP host:port (port 0 = ephemeral) "
                  "instead of in-process calls");
  int snapshot_every = 25;
  run->add_option("--snapshot-every", snapshot_every,
                  "Q-table snapshot cadence in kills-or-deaths (0 = off)")
      ->check(CLI::NonNegativeNumber);
  int threads = 0;
  run->add_option("--threads", threads, "Worker threads (0 = auto)");
  bool full_scale = false;
  run->add_flag("--full-scale", full_scale,
                "1500 lives x 10 seeds unless overridden explicitly");

  auto* report = app.add_subcommand("report", "Aggregate finished runs");
  std::string report_dir;
  report->add_option("dir", report_dir, "Output root to aggregate")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) {
      marksman::RunConfig cfg;
      cfg.pcwr = pcwr == "on";
      cfg.pas_interval = pas;
      if (full_scale) {
        if (lives_opt->count() == 0) lives = 1500;
        if (seeds_opt->count() == 0)
          seeds_csv = "1,2,3,4,5,6,7,8,9,10";
      }
      cfg.lives_target = lives;
      cfg.seeds = parse_seeds(seeds_csv);
      cfg.opponent_level = level;
      cfg.out_root = marksman::resolve_out_root(out);
      cfg.snapshot_every = snapshot_every;
      cfg.threads = threads;
      cfg.listen_address = listen;

      const auto results = marksman::run_experiment(cfg);
      for (const auto& r : results) {
        const auto& s = r.summary;
        std::cout << s.config_name << " seed " << r.seed << ": lives "
                  << s.lives << ", kills " << s.kills << ", K:D "
                  << fmt_kd(s.final_kd) << ", accuracy " << s.overall_accuracy
                  << ", avg hits/life " << s.avg_hits_per_life << " -> "
                  << r.dir.string() << '\n';
      }
      return 0;
    }
    const int found = marksman::report(report_dir, std::cout);
    if (found == 0) {
      std::cerr << "no summary.csv files under " << report_dir << '\n';
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
