#include "marksman/rl_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace marksman {

void AgentConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(alpha) || !in_unit(gamma) || !in_unit(lambda)) {
    throw std::invalid_argument("alpha, gamma, lambda must lie in [0, 1]");
  }
  if (!in_unit(epsilon_initial) || !in_unit(epsilon_floor) ||
      epsilon_floor > epsilon_initial) {
    throw std::invalid_argument("epsilon floor must not exceed initial rate");
  }
  if (epsilon_step < 0.0 || epsilon_step_deaths < 1) {
    throw std::invalid_argument("bad epsilon schedule");
  }
  if (pas_interval < 1) {
    throw std::invalid_argument("pas_interval must be >= 1");
  }
  if (hit_reward <= 0.0) {
    throw std::invalid_argument("hit_reward must be positive");
  }
}

QTable::QTable(int states, int actions)
    : states_(states),
      actions_(actions),
      values_(static_cast<std::size_t>(states) * actions, 0.0) {
  if (states < 1 || actions < 1) {
    throw std::invalid_argument("table dimensions must be positive");
  }
}

TraceTable::TraceTable(int states, int actions)
    : states_(states),
      actions_(actions),
      values_(static_cast<std::size_t>(states) * actions, 0.0) {
  if (states < 1 || actions < 1) {
    throw std::invalid_argument("table dimensions must be positive");
  }
}

void TraceTable::reset() {
  for (std::size_t idx : touched_) values_[idx] = 0.0;
  touched_.clear();
}

void TraceTable::set_replacing(int state, int action) {
  const std::size_t idx = static_cast<std::size_t>(state) * actions_ + action;
  if (values_[idx] == 0.0) touched_.push_back(idx);
  values_[idx] = 1.0;
}

void TraceTable::apply_and_decay(QTable& q, double alpha_delta, double decay) {
  for (std::size_t idx : touched_) {
    q.values_[idx] += alpha_delta * values_[idx];
    values_[idx] *= decay;
  }
}

double epsilon_for_deaths(std::int64_t death_count, const AgentConfig& cfg) {
  // Basis points of 0.01%: the schedule's rates are percentages, so exact
  // integer arithmetic keeps the floor exact instead of accumulating
  // binary round-off.
  const std::int64_t initial_bp = std::llround(cfg.epsilon_initial * 1e4);
  const std::int64_t step_bp = std::llround(cfg.epsilon_step * 1e4);
  const std::int64_t floor_bp = std::llround(cfg.epsilon_floor * 1e4);
  const std::int64_t k = death_count / cfg.epsilon_step_deaths;
  const std::int64_t value_bp = std::max(floor_bp, initial_bp - step_bp * k);
  return static_cast<double>(value_bp) / 1e4;
}

int select_action(std::span<const double> q_row, double epsilon, Rng& rng) {
  const int n = static_cast<int>(q_row.size());
  if (rng.uniform() < epsilon) {
    return static_cast<int>(rng.uniform_int(n));
  }
  double best = q_row[0];
  for (int i = 1; i < n; ++i) best = std::max(best, q_row[i]);
  int tie_count = 0;
  int first_tie = 0;
  // Collect ties positionally; choosing uniformly among them avoids the
  // systematic low-index aim bias an untrained all-zero row would cause.
  static thread_local std::vector<int> ties;
  ties.clear();
  for (int i = 0; i < n; ++i) {
    if (q_row[i] == best) {
      if (tie_count == 0) first_tie = i;
      ties.push_back(i);
      ++tie_count;
    }
  }
  if (tie_count == 1) return first_tie;
  return ties[rng.uniform_int(static_cast<std::uint64_t>(tie_count))];
}

void sarsa_step_update(QTable& q, TraceTable& e, int state, int action,
                       double reward, int next_state, int next_action,
                       bool terminal, const AgentConfig& cfg) {
  const double bootstrap =
      terminal ? 0.0 : cfg.gamma * q.at(next_state, next_action);
  const double delta = reward + bootstrap - q.at(state, action);
  e.set_replacing(state, action);
  e.apply_and_decay(q, cfg.alpha * delta, cfg.gamma * cfg.lambda);
}

void apply_period_updates(QTable& q, TraceTable& e,
                          const ShootingPeriodLog& period,
                          std::span<const double> rewards, bool terminal,
                          std::optional<std::pair<int, int>> bootstrap,
                          const AgentConfig& cfg) {
  if (rewards.size() != period.size()) {
    throw std::invalid_argument("rewards length " +
                                std::to_string(rewards.size()) +
                                " does not match period length " +
                                std::to_string(period.size()));
  }
  if (!terminal && !bootstrap.has_value() && !period.empty()) {
    throw std::invalid_argument(
        "non-terminal period requires a bootstrap state-action");
  }
  e.reset();
  const std::size_t n = period.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PeriodStep& step = period.steps[i];
    int next_state = 0;
    int next_action = 0;
    bool step_terminal = false;
    if (i + 1 < n) {
      next_state = period.steps[i + 1].state.index;
      next_action = period.steps[i + 1].action.id();
    } else if (terminal) {
      step_terminal = true;
    } else {
      next_state = bootstrap->first;
      next_action = bootstrap->second;
    }
    sarsa_step_update(q, e, step.state.index, step.action.id(), rewards[i],
                      next_state, next_action, step_terminal, cfg);
  }
}

namespace {

constexpr char kMagic[4] = {'Q', 'T', 'A', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ofstream& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_qtable(const std::filesystem::path& path, const QTable& q) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out.write(kMagic, 4);
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(q.states()));
  put_u32(out, static_cast<std::uint32_t>(q.actions()));
  for (double v : q.raw()) put_f64(out, v);
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

QTable load_qtable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("bad snapshot magic in " + path.string());
  }
  const std::uint32_t version = get_u32(in);
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported snapshot version " +
                             std::to_string(version));
  }
  const std::uint32_t states = get_u32(in);
  const std::uint32_t actions = get_u32(in);
  if (!in || states == 0 || actions == 0) {
    throw std::runtime_error("bad snapshot dimensions in " + path.string());
  }
  QTable q(static_cast<int>(states), static_cast<int>(actions));
  for (std::uint32_t s = 0; s < states; ++s) {
    for (std::uint32_t a = 0; a < actions; ++a) {
      q.at(static_cast<int>(s), static_cast<int>(a)) = get_f64(in);
    }
  }
  if (!in) {
    throw std::runtime_error("truncated snapshot " + path.string());
  }
  return q;
}

void export_qtable_csv(const std::filesystem::path& path, const QTable& q) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "state_index,action_id,q_value\n";
  char buf[64];
  for (int s = 0; s < q.states(); ++s) {
    for (int a = 0; a < q.actions(); ++a) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", s, a, q.at(s, a));
      out << buf;
    }
  }
}

}  // namespace marksman
