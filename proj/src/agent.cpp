#include "marksman/agent.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace marksman {
namespace {

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::string outcome_string(const ShootingPeriodLog& period) {
  std::string s;
  s.reserve(period.size());
  for (const auto& step : period.steps)
    s += step.outcome == Outcome::Hit ? 'H' : 'M';
  return s;
}

}  // namespace

LearnerAgent::LearnerAgent(const LearnerOptions& options, std::uint64_t seed)
    : options_(options), rng_(seed) {
  options_.agent.validate();
  if (options_.fire_range <= 0.0)
    throw std::invalid_argument("fire_range must be positive");
  if (options_.registration_grace < 0)
    throw std::invalid_argument("registration_grace must be >= 0");
  pas_.interval = options_.agent.pas_interval;
  lives_.reserve(256);
  life_selections_.reserve(256);
}

double LearnerAgent::current_epsilon() const {
  return epsilon_for_deaths(deaths_, options_.agent);
}

LearnerCommand LearnerAgent::decide(std::int64_t tick, const Observation& obs) {
  const bool want_shoot = obs.visible && obs.distance <= options_.fire_range;

  if (!want_shoot) {
    if (period_open_) {
      if (!in_grace_) {
        in_grace_ = true;
        grace_left_ = options_.registration_grace;
      } else {
        --grace_left_;
      }
      if (grace_left_ <= 0) close_period(/*terminal=*/false);
    }
    return {};
  }

  // Re-press during the grace window starts a new period rather than
  // resuming the old one: the release already ended the engagement.
  if (period_open_ && in_grace_) close_period(/*terminal=*/false);

  const StateKey state = encode_observation(obs.relative());
  const AimAction action =
      next_action(pas_, q_.row(state.index), current_epsilon(), rng_);

  // The first selection after a non-terminal period supplies that
  // period's bootstrap target.
  if (pending_) resolve_pending(std::make_pair(state.index, action.id()));

  period_open_ = true;
  in_grace_ = false;
  period_.steps.push_back({state, action, Outcome::Miss, tick});
  life_counts_[action.id()] += 1;

  LearnerCommand cmd;
  cmd.shoot = true;
  cmd.action = action;
  return cmd;
}

void LearnerAgent::ingest_events(const std::vector<GameEvent>& events) {
  for (const auto& ev : events) {
    if (ev.kind == GameEvent::Kind::Damage) {
      if (ev.victim == kOpponentId) attribute_hit(ev);
      // Damage to the learner only matters when it kills; health is the
      // world's business.
    } else {
      handle_death(ev);
    }
  }
}

void LearnerAgent::attribute_hit(const GameEvent& event) {
  auto flip = [](ShootingPeriodLog& log, std::size_t idx) {
    log.steps[idx].outcome = Outcome::Hit;
  };

  auto locate = [&](const ShootingPeriodLog& log) -> std::optional<std::size_t> {
    if (log.empty()) return std::nullopt;
    if (!options_.ground_truth_attribution) return log.size() - 1;
    for (std::size_t i = log.size(); i-- > 0;)
      if (log.steps[i].tick == event.fired_tick) return i;
    return std::nullopt;
  };

  if (period_open_) {
    if (auto idx = locate(period_)) {
      flip(period_, *idx);
      return;
    }
  } else if (pending_) {
    // Late registration after a grace-close (possible when the grace is
    // shorter than the registration delay). Re-shape and fix the
    // close-time tallies in place; the pending period never crosses a
    // life boundary, so the adjustments target the current life.
    if (auto idx = locate(pending_->period)) {
      if (pending_->period.steps[*idx].outcome != Outcome::Hit) {
        flip(pending_->period, *idx);
        const auto rewards =
            shape(pending_->period, options_.agent.reward_config());
        const double new_sum = sum(rewards);
        life_hits_ += 1;
        life_misses_ -= 1;
        life_reward_ += new_sum - pending_->shaped_sum;
        auto& rec = periods_.back();
        rec.outcomes = outcome_string(pending_->period);
        rec.plain_sum =
            sum(plain_rewards(pending_->period, options_.agent.reward_config()));
        rec.shaped_sum = new_sum;
        pending_->rewards = rewards;
        pending_->shaped_sum = new_sum;
      }
      return;
    }
  }
  ++stray_hits_;
}

void LearnerAgent::handle_death(const GameEvent& event) {
  // Either death terminates the engagement: flush the open period as
  // terminal, or the pending one (its would-be bootstrap never comes).
  if (period_open_) {
    // Cancel any grace; the period ends here.
    in_grace_ = false;
    close_period(/*terminal=*/true);
  } else if (pending_) {
    resolve_pending(std::nullopt);
  }
  reset(pas_);

  if (event.victim == kOpponentId) {
    kills_ += 1;
    life_kills_ += 1;
    kill_streak_ += 1;
    max_kill_streak_ = std::max(max_kill_streak_, kill_streak_);
  } else {
    finalize_life(event.tick);
    deaths_ += 1;
    kill_streak_ = 0;
    life_index_ += 1;
    life_start_tick_ = event.tick;
    life_hits_ = 0;
    life_misses_ = 0;
    life_reward_ = 0.0;
    life_kills_ = 0;
    life_counts_ = {};
  }

  if (on_kill_or_death) on_kill_or_death(kills_ + deaths_);
}

void LearnerAgent::finalize_life(std::int64_t death_tick) {
  LifeMetrics m;
  m.life_index = life_index_;
  m.hits = life_hits_;
  m.misses = life_misses_;
  m.reward_sum = life_reward_;
  if (life_hits_ + life_misses_ > 0)
    m.accuracy = static_cast<double>(life_hits_) /
                 static_cast<double>(life_hits_ + life_misses_);
  m.time_alive_s =
      static_cast<double>(death_tick - life_start_tick_) * kLogicTickSeconds;
  m.kills_during_life = life_kills_;
  m.epsilon_in_effect = epsilon_for_deaths(deaths_, options_.agent);
  lives_.push_back(m);
  life_selections_.push_back(life_counts_);
}

void LearnerAgent::close_period(bool terminal) {
  if (!period_open_) return;
  period_open_ = false;
  in_grace_ = false;
  reset(pas_);

  const auto rewards = shape(period_, options_.agent.reward_config());
  const double shaped_sum = sum(rewards);

  std::int64_t hits = 0;
  for (const auto& step : period_.steps)
    if (step.outcome == Outcome::Hit) ++hits;
  life_hits_ += hits;
  life_misses_ += static_cast<std::int64_t>(period_.size()) - hits;
  life_reward_ += shaped_sum;

  PeriodRecord rec;
  rec.life_index = life_index_;
  rec.outcomes = outcome_string(period_);
  rec.plain_sum = sum(plain_rewards(period_, options_.agent.reward_config()));
  rec.shaped_sum = shaped_sum;
  periods_.push_back(std::move(rec));

  if (terminal) {
    apply_period_updates(q_, traces_, period_, rewards, /*terminal=*/true,
                         std::nullopt, options_.agent);
    check_q_bounds();
    pending_.reset();
  } else {
    pending_ = PendingPeriod{std::move(period_), rewards, shaped_sum};
  }
  period_ = {};
}

void LearnerAgent::resolve_pending(
    std::optional<std::pair<int, int>> bootstrap) {
  if (!pending_) return;
  apply_period_updates(q_, traces_, pending_->period, pending_->rewards,
                       /*terminal=*/!bootstrap.has_value(), bootstrap,
                       options_.agent);
  check_q_bounds();
  pending_.reset();
}

void LearnerAgent::check_q_bounds() const {
  // Divergence guard. The TD fixed points lie in [-2, 1000] (geometric
  // series for r in [-1, 500], gamma 0.5), but with lambda = 0.9 a large
  // negative delta late in a period legitimately kicks trace-carrying
  // entries below the equilibrium band; the kick is bounded by
  // alpha * |delta| * gamma*lambda/(1 - gamma*lambda) ~ 0.57 * |delta|
  // per own-visit cycle and mean-reverts at the next visit. Anything
  // outside the widened band means the update rule is broken.
  for (const std::size_t flat : traces_.touched()) {
    const double v = q_.raw()[flat];
    if (!(v >= kQLowerGuard && v <= kQUpperGuard))
      throw std::logic_error("Q diverged after period update: " +
                             std::to_string(v) + " at flat index " +
                             std::to_string(flat));
  }
}

void LearnerAgent::finish() {
  if (period_open_) {
    in_grace_ = false;
    close_period(/*terminal=*/true);
  } else if (pending_) {
    resolve_pending(std::nullopt);
  }
}

}  // namespace marksman
