#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "marksman/action_grid.hpp"
#include "marksman/geometry.hpp"
#include "marksman/rng.hpp"
#include "marksman/state_codec.hpp"

namespace marksman {

inline constexpr double kLogicTickSeconds = 0.25;
inline constexpr int kPhysicsSubsteps = 4;  // 62.5 ms each

inline constexpr double kAvatarHalfWidth = 25.0;   // UU
inline constexpr double kAvatarHalfHeight = 50.0;  // UU
inline constexpr double kAvatarMaxSpeed = 440.0;   // UU/s
inline constexpr double kAvatarEyeHeight = 50.0;   // box center

enum AvatarId : int { kLearnerId = 0, kOpponentId = 1 };

struct AvatarState {
  Vec2 position;            // ground-plane box center, UU
  Vec2 velocity;            // UU/s
  double facing_deg = 0.0;  // world yaw, (-180, 180]
  double health = 100.0;
  std::int64_t kills = 0;
  std::int64_t deaths = 0;
  int kill_streak = 0;
  int max_kill_streak = 0;

  bool alive() const { return health > 0.0; }
  Vec3 center() const { return {position.x, position.y, kAvatarEyeHeight}; }
};

struct WeaponModel {
  int bullets_per_tick = 4;
  double spread_stddev_deg = 1.5;
  double recoil_drift_deg = 0.3;  // added per consecutive firing tick
  double recoil_cap_deg = 3.0;
  double damage_per_bullet = 8.0;
  int registration_delay = 1;  // logic ticks between firing and the damage
                               // event becoming observable
};

struct ArenaConfig {
  double width = 2000.0;
  double height = 2000.0;
  double wall_margin = 30.0;
  std::vector<Vec2> spawn_points = {
      {250.0, 250.0}, {1750.0, 250.0}, {250.0, 1750.0}, {1750.0, 1750.0}};
};

struct OpponentModel {
  int level = 3;  // 1..5
  double damage_per_hit = 10.0;
  bool movement_enabled = true;
  bool return_fire_enabled = true;
};

struct SimConfig {
  WeaponModel weapon;
  ArenaConfig arena;
  OpponentModel opponent;
  bool learner_movement_enabled = true;
  std::optional<Vec2> learner_start;   // default: spawn point 0
  std::optional<Vec2> opponent_start;  // default: spawn point 3
};

// Per-tick probability that the scripted opponent's return fire damages
// the learner: base(level) * clamp(500 / distance, 0.2, 1.0).
double opponent_fire_probability(int level, double distance);

struct GameEvent {
  enum class Kind { Damage, Death } kind = Kind::Damage;
  std::int64_t tick = 0;  // delivery tick
  int victim = kOpponentId;
  // Damage events only:
  std::int64_t fired_tick = 0;
  int bullets_hit = 0;
  double damage = 0.0;
};

// Learner-facing view of the world, quantized to 1e-6 so the text
// transport reproduces it bit-exactly.
struct Observation {
  bool visible = true;
  double vel_forward = 0.0;
  double vel_lateral = 0.0;
  double facing_angle = 0.0;
  double distance = 0.0;

  RelativeObservation relative() const {
    return {vel_forward, vel_lateral, facing_angle, distance};
  }
};

struct LearnerCommand {
  bool shoot = false;
  AimAction action;
};

struct TickResult {
  Observation observation;           // post-tick view
  std::vector<GameEvent> events;     // delivered during this tick
};

struct SpreadSample {
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
};

// Ray-versus-avatar test. The ray starts at origin toward aim_point,
// perturbed by the sampled angular errors in the shooter's view frame.
// The avatar presents its facing silhouette: a rectangle 2*half_width wide
// and 2*half_height tall centered on target_center, perpendicular to the
// origin->center line. Hit requires the intersection to lie within
// max_range along the ray.
bool hit_test(const Vec3& origin, const Vec3& aim_point,
              const SpreadSample& spread, const Vec3& target_center,
              double max_range = 1e12);

// Moves a dead avatar to a spawn point, restores health, zeroes velocity,
// and updates kill/death/streak bookkeeping on both sides. Throws
// std::logic_error when the victim is still alive.
void respawn(AvatarState& victim, AvatarState& killer,
             const std::vector<Vec2>& spawn_points, Rng& rng);

// Deterministic headless duel: scripted strafing learner avatar versus a
// scripted fixed-strategy opponent. The learner's only free decision is
// the shoot command; everything else is driven by the seeded RNG stream.
class CombatWorld {
 public:
  CombatWorld(const SimConfig& config, std::uint64_t seed);

  Observation observe() const;

  // Advances one 0.25 s logic tick. Throws std::out_of_range when the
  // command carries an invalid action id.
  TickResult tick(const LearnerCommand& command);

  std::int64_t tick_index() const { return tick_; }
  const AvatarState& learner() const { return avatars_[kLearnerId]; }
  const AvatarState& opponent() const { return avatars_[kOpponentId]; }
  const SimConfig& config() const { return config_; }

  // Optional newline-record sink for replay debugging; receives lines of
  // the form "tick,kind,payload".
  void set_event_log(std::function<void(const std::string&)> sink) {
    event_log_ = std::move(sink);
  }

 private:
  struct PendingDamage {
    std::int64_t fired_tick = 0;
    std::int64_t registered_tick = 0;
    int victim = kOpponentId;
    int bullets_hit = 0;
    double damage = 0.0;
  };

  void plan_opponent();
  void plan_learner();
  Vec2 opponent_velocity_at(const Vec2& pos) const;
  Vec2 learner_velocity_at(const Vec2& pos) const;
  void integrate_substep(double dt);
  void resolve_deaths(std::vector<GameEvent>& out);
  void log_line(std::int64_t tick, const char* kind, const std::string& payload);

  SimConfig config_;
  Rng rng_;
  std::int64_t tick_ = 0;
  AvatarState avatars_[2];
  std::deque<PendingDamage> pending_;
  double recoil_deg_ = 0.0;  // grows while the trigger is held

  // Opponent leg plan.
  Vec2 waypoint_;
  double opponent_speed_ = 0.0;
  int pause_ticks_ = 0;
  int leg_ticks_left_ = 0;
  int speed_band_cursor_ = 0;

  // Learner strafe plan.
  int strafe_dir_ = 1;
  int flip_ticks_left_ = 0;
  double target_ring_ = 700.0;
  int ring_ticks_left_ = 0;
  double strafe_speed_ = 200.0;

  std::function<void(const std::string&)> event_log_;
};

}  // namespace marksman
