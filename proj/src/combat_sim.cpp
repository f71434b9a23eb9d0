#include "marksman/combat_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace marksman {
namespace {

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

// Round-to-micro so the %.6f wire encoding round-trips bit-exactly.
double quantize_micro(double v) { return std::round(v * 1e6) / 1e6; }

double quantize_angle(double deg) {
  double q = quantize_micro(deg);
  if (q <= -180.0) q += 360.0;
  if (q > 180.0) q -= 360.0;
  return q;
}

double heading_deg(const Vec2& v) { return rad_to_deg(std::atan2(v.y, v.x)); }

// Band-interior speeds so per-leg jitter (x0.9..x1.1) stays in band:
// 120 -> [108,132] stationary..L1, 250 -> [225,275] L2, 380 -> [342,418] L3.
constexpr double kOpponentBandSpeeds[3] = {120.0, 250.0, 380.0};
constexpr double kLearnerStrafeSpeeds[3] = {90.0, 200.0, 330.0};
constexpr double kTargetRings[4] = {400.0, 700.0, 1000.0, 1600.0};

constexpr double kWaypointMargin = 150.0;
constexpr double kWaypointReached = 60.0;
constexpr int kLegTickCap = 40;       // 10 s
constexpr double kBulletMaxRange = 4000.0;

}  // namespace

double opponent_fire_probability(int level, double distance) {
  if (level < 1 || level > 5) throw std::out_of_range("opponent level must be 1..5");
  static constexpr double kBase[5] = {0.05, 0.10, 0.15, 0.20, 0.25};
  double falloff = distance <= 0.0 ? 1.0 : clamp(500.0 / distance, 0.2, 1.0);
  return kBase[level - 1] * falloff;
}

bool hit_test(const Vec3& origin, const Vec3& aim_point,
              const SpreadSample& spread, const Vec3& target_center,
              double max_range) {
  Vec3 f = aim_point - origin;
  const double flen = f.norm();
  if (flen < 1e-9) return false;
  f = f * (1.0 / flen);

  Vec3 right{f.y, -f.x, 0.0};
  const double rlen = right.norm();
  if (rlen < 1e-9) return false;  // shooting straight up/down
  right = right * (1.0 / rlen);
  const Vec3 up = right.cross(f);

  const Vec3 dir = (f + right * std::tan(deg_to_rad(spread.yaw_deg)) +
                    up * std::tan(deg_to_rad(spread.pitch_deg)))
                       .normalized();

  // The avatar presents a view-facing rectangle: plane through the center,
  // normal along origin->center.
  Vec3 n = target_center - origin;
  const double nlen = n.norm();
  if (nlen < 1e-9) return false;
  n = n * (1.0 / nlen);

  const double along = dir.dot(n);
  if (along <= 1e-12) return false;
  const double t = nlen / along;
  if (t > max_range) return false;

  const Vec3 dev = origin + dir * t - target_center;
  Vec3 lat_axis{n.y, -n.x, 0.0};
  const double lat_len = lat_axis.norm();
  if (lat_len < 1e-9) return false;
  lat_axis = lat_axis * (1.0 / lat_len);
  const Vec3 vert_axis = lat_axis.cross(n);

  return std::abs(dev.dot(lat_axis)) <= kAvatarHalfWidth &&
         std::abs(dev.dot(vert_axis)) <= kAvatarHalfHeight;
}

void respawn(AvatarState& victim, AvatarState& killer,
             const std::vector<Vec2>& spawn_points, Rng& rng) {
  if (victim.alive()) throw std::logic_error("respawn: avatar is still alive");
  if (spawn_points.empty())
    throw std::invalid_argument("respawn: no spawn points");

  victim.deaths += 1;
  victim.kill_streak = 0;
  killer.kills += 1;
  killer.kill_streak += 1;
  killer.max_kill_streak = std::max(killer.max_kill_streak, killer.kill_streak);

  // Prefer points away from the killer so a fresh life starts outside
  // point-blank range.
  std::vector<int> far;
  for (int i = 0; i < static_cast<int>(spawn_points.size()); ++i) {
    if ((spawn_points[i] - killer.position).norm() > 400.0) far.push_back(i);
  }
  int pick;
  if (far.empty()) {
    pick = static_cast<int>(rng.uniform_int(spawn_points.size()));
  } else {
    pick = far[rng.uniform_int(far.size())];
  }

  victim.position = spawn_points[pick];
  victim.velocity = {0.0, 0.0};
  victim.health = 100.0;
  victim.facing_deg =
      normalize_angle_deg(heading_deg(killer.position - victim.position));
}

CombatWorld::CombatWorld(const SimConfig& config, std::uint64_t seed)
    : config_(config), rng_(seed) {
  const auto& w = config_.weapon;
  if (w.bullets_per_tick < 1) throw std::invalid_argument("bullets_per_tick < 1");
  if (w.registration_delay < 0) throw std::invalid_argument("registration_delay < 0");
  if (w.spread_stddev_deg < 0.0) throw std::invalid_argument("spread < 0");
  if (config_.opponent.level < 1 || config_.opponent.level > 5)
    throw std::invalid_argument("opponent level must be 1..5");
  if (config_.arena.spawn_points.empty())
    throw std::invalid_argument("arena needs spawn points");
  if (config_.arena.width < 400.0 || config_.arena.height < 400.0)
    throw std::invalid_argument("arena too small");

  auto& me = avatars_[kLearnerId];
  auto& op = avatars_[kOpponentId];
  me.position = config_.learner_start.value_or(config_.arena.spawn_points.front());
  op.position = config_.opponent_start.value_or(config_.arena.spawn_points.back());
  me.facing_deg = normalize_angle_deg(heading_deg(op.position - me.position));
  op.facing_deg = normalize_angle_deg(heading_deg(me.position - op.position));
  waypoint_ = op.position;
}

void CombatWorld::log_line(std::int64_t tick, const char* kind,
                           const std::string& payload) {
  if (!event_log_) return;
  event_log_(std::to_string(tick) + "," + kind + "," + payload);
}

void CombatWorld::plan_opponent() {
  if (!config_.opponent.movement_enabled) return;
  if (pause_ticks_ > 0) {
    --pause_ticks_;
    opponent_speed_ = 0.0;
    return;
  }
  --leg_ticks_left_;
  const bool arrived =
      (waypoint_ - avatars_[kOpponentId].position).norm() < kWaypointReached;
  if (leg_ticks_left_ > 0 && !arrived && opponent_speed_ > 0.0) return;

  // New leg: advance the speed-band cycle so play visits every velocity
  // bucket family, occasionally standing still.
  speed_band_cursor_ = (speed_band_cursor_ + 1) % 3;
  opponent_speed_ =
      kOpponentBandSpeeds[speed_band_cursor_] * (0.9 + 0.2 * rng_.uniform());
  const auto& a = config_.arena;
  waypoint_ = {kWaypointMargin + rng_.uniform() * (a.width - 2.0 * kWaypointMargin),
               kWaypointMargin + rng_.uniform() * (a.height - 2.0 * kWaypointMargin)};
  leg_ticks_left_ = kLegTickCap;
  if (rng_.chance(0.15)) pause_ticks_ = 2 + static_cast<int>(rng_.uniform_int(6));
}

void CombatWorld::plan_learner() {
  if (!config_.learner_movement_enabled) return;
  --flip_ticks_left_;
  --ring_ticks_left_;
  if (flip_ticks_left_ <= 0) {
    strafe_dir_ = -strafe_dir_;
    strafe_speed_ = kLearnerStrafeSpeeds[rng_.uniform_int(3)] *
                    (0.9 + 0.2 * rng_.uniform());
    flip_ticks_left_ = 8 + static_cast<int>(rng_.uniform_int(8));  // 2..4 s
  }
  if (ring_ticks_left_ <= 0) {
    target_ring_ = kTargetRings[rng_.uniform_int(4)];
    ring_ticks_left_ = 24 + static_cast<int>(rng_.uniform_int(24));  // 6..12 s
  }
}

Vec2 CombatWorld::opponent_velocity_at(const Vec2& pos) const {
  if (!config_.opponent.movement_enabled || opponent_speed_ <= 0.0)
    return {0.0, 0.0};
  const Vec2 to_wp = waypoint_ - pos;
  const double d = to_wp.norm();
  if (d < 1.0) return {0.0, 0.0};
  return to_wp * (opponent_speed_ / d);
}

Vec2 CombatWorld::learner_velocity_at(const Vec2& pos) const {
  if (!config_.learner_movement_enabled) return {0.0, 0.0};
  const Vec2 to_opp = avatars_[kOpponentId].position - pos;
  const double dist = std::max(to_opp.norm(), 1e-6);
  const Vec2 fwd = to_opp * (1.0 / dist);
  const Vec2 right{fwd.y, -fwd.x};
  // Orbit the target ring: close radial error at up to 220 UU/s while
  // strafing tangentially.
  const double radial = clamp((dist - target_ring_) * 1.2, -220.0, 220.0);
  Vec2 vel = fwd * radial + right * (strafe_dir_ * strafe_speed_);
  const double speed = vel.norm();
  const double cap = kAvatarMaxSpeed - 10.0;
  if (speed > cap) vel = vel * (cap / speed);
  return vel;
}

void CombatWorld::integrate_substep(double dt) {
  avatars_[kOpponentId].velocity =
      opponent_velocity_at(avatars_[kOpponentId].position);
  avatars_[kLearnerId].velocity =
      learner_velocity_at(avatars_[kLearnerId].position);

  const auto& a = config_.arena;
  for (auto& av : avatars_) {
    av.position = av.position + av.velocity * dt;
    const double lo_x = a.wall_margin, hi_x = a.width - a.wall_margin;
    const double lo_y = a.wall_margin, hi_y = a.height - a.wall_margin;
    if (av.position.x < lo_x || av.position.x > hi_x) {
      av.position.x = clamp(av.position.x, lo_x, hi_x);
      av.velocity.x = 0.0;  // report the slide, not the commanded speed
    }
    if (av.position.y < lo_y || av.position.y > hi_y) {
      av.position.y = clamp(av.position.y, lo_y, hi_y);
      av.velocity.y = 0.0;
    }
  }

  auto& me = avatars_[kLearnerId];
  auto& op = avatars_[kOpponentId];
  if (op.velocity.norm() > 1.0)
    op.facing_deg = normalize_angle_deg(heading_deg(op.velocity));
  const Vec2 to_op = op.position - me.position;
  if (to_op.norm() > 1e-9)
    me.facing_deg = normalize_angle_deg(heading_deg(to_op));
}

Observation CombatWorld::observe() const {
  const auto& me = avatars_[kLearnerId];
  const auto& op = avatars_[kOpponentId];

  const Vec2 d = op.position - me.position;
  const double dist = d.norm();
  const Vec2 fwd = dist > 1e-9 ? d * (1.0 / dist) : Vec2{1.0, 0.0};
  const Vec2 right{fwd.y, -fwd.x};
  const Vec2 rel = op.velocity - me.velocity;

  // Opponent orientation relative to its line of sight back to the bot:
  // 0 = staring straight at us.
  const double bearing_back = heading_deg(Vec2{-d.x, -d.y});
  const double facing = normalize_angle_deg(op.facing_deg - bearing_back);

  Observation obs;
  obs.visible = true;
  obs.vel_forward = quantize_micro(rel.dot(fwd));
  obs.vel_lateral = quantize_micro(rel.dot(right));
  obs.facing_angle = quantize_angle(facing);
  obs.distance = quantize_micro(dist);
  return obs;
}

TickResult CombatWorld::tick(const LearnerCommand& command) {
  if (command.shoot) {
    const auto& act = command.action;
    if (act.x_index < 0 || act.x_index >= kActionGridWidth ||
        act.z_index < 0 || act.z_index >= kActionGridHeight)
      throw std::out_of_range("invalid aim action");
  }

  plan_opponent();
  plan_learner();

  auto& me = avatars_[kLearnerId];
  auto& op = avatars_[kOpponentId];

  // The aim point freezes at trigger time; strafing during the tick's
  // sub-steps is what the lateral skew has to anticipate.
  bool firing = command.shoot;
  Vec3 aim{};
  if (firing) {
    if ((op.position - me.position).norm() < 1e-6) {
      firing = false;  // no view frame at zero range
    } else {
      aim = aim_point(op.center(), me.center(), command.action);
    }
  }
  const double recoil_now = recoil_deg_;
  const double spread = config_.weapon.spread_stddev_deg;

  int bullets_hit = 0;
  int fired = 0;
  for (int s = 0; s < kPhysicsSubsteps; ++s) {
    integrate_substep(kLogicTickSeconds / kPhysicsSubsteps);
    if (!firing) continue;
    const int upto =
        (s + 1) * config_.weapon.bullets_per_tick / kPhysicsSubsteps;
    for (; fired < upto; ++fired) {
      const SpreadSample sample{rng_.gaussian() * spread,
                                rng_.gaussian() * spread + recoil_now};
      if (hit_test(me.center(), aim, sample, op.center(), kBulletMaxRange))
        ++bullets_hit;
    }
  }

  if (firing) {
    recoil_deg_ = std::min(config_.weapon.recoil_cap_deg,
                           recoil_deg_ + config_.weapon.recoil_drift_deg);
    log_line(tick_, "FIRE",
             "action=" + std::to_string(command.action.id()) +
                 " bullets=" + std::to_string(fired) +
                 " hits=" + std::to_string(bullets_hit));
    if (bullets_hit > 0) {
      pending_.push_back({tick_, tick_ + config_.weapon.registration_delay,
                          kOpponentId, bullets_hit,
                          bullets_hit * config_.weapon.damage_per_bullet});
    }
  } else {
    recoil_deg_ = 0.0;
  }

  if (config_.opponent.return_fire_enabled) {
    const double dist = (op.position - me.position).norm();
    const double p = opponent_fire_probability(config_.opponent.level, dist);
    if (rng_.chance(p)) {
      pending_.push_back({tick_, tick_ + config_.weapon.registration_delay,
                          kLearnerId, 1, config_.opponent.damage_per_hit});
    }
  }

  TickResult result;
  while (!pending_.empty() && pending_.front().registered_tick <= tick_) {
    const PendingDamage pd = pending_.front();
    pending_.pop_front();
    avatars_[pd.victim].health -= pd.damage;
    GameEvent ev;
    ev.kind = GameEvent::Kind::Damage;
    ev.tick = tick_;
    ev.victim = pd.victim;
    ev.fired_tick = pd.fired_tick;
    ev.bullets_hit = pd.bullets_hit;
    ev.damage = pd.damage;
    result.events.push_back(ev);
    log_line(tick_, "DMG",
             "victim=" + std::to_string(pd.victim) +
                 " dmg=" + std::to_string(pd.damage) +
                 " fired=" + std::to_string(pd.fired_tick));
  }

  resolve_deaths(result.events);

  result.observation = observe();
  ++tick_;
  return result;
}

void CombatWorld::resolve_deaths(std::vector<GameEvent>& out) {
  for (int victim = 0; victim < 2; ++victim) {
    auto& v = avatars_[victim];
    if (v.alive()) continue;
    auto& killer = avatars_[1 - victim];
    GameEvent ev;
    ev.kind = GameEvent::Kind::Death;
    ev.tick = tick_;
    ev.victim = victim;
    out.push_back(ev);
    respawn(v, killer, config_.arena.spawn_points, rng_);
    if (victim == kOpponentId) {
      // Restart the leg plan from the new position.
      waypoint_ = v.position;
      opponent_speed_ = 0.0;
      leg_ticks_left_ = 0;
      pause_ticks_ = 0;
    }
    log_line(tick_, "DEATH", "victim=" + std::to_string(victim));
    log_line(tick_, "SPAWN",
             "victim=" + std::to_string(victim) +
                 " x=" + std::to_string(v.position.x) +
                 " y=" + std::to_string(v.position.y));
  }
}

}  // namespace marksman
