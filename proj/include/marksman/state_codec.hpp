#pragma once

#include <cstdint>

namespace marksman {

// Discrete state space: 37 velocity buckets x 8 rotation sectors x
// 4 distance bands = 1184 states.
inline constexpr int kVelocityBuckets = 37;
inline constexpr int kRotationSectors = 8;
inline constexpr int kDistanceBands = 4;
inline constexpr int kStateCount =
    kVelocityBuckets * kRotationSectors * kDistanceBands;

// Below this speed on both axes the opponent counts as stationary.
// Keeps numeric noise from flapping between Stationary and level 1.
inline constexpr double kStationarySpeedThreshold = 10.0;  // UU/s

// Speed band edges shared by both movement axes.
inline constexpr double kSpeedLevel2Edge = 150.0;  // UU/s
inline constexpr double kSpeedLevel3Edge = 300.0;  // UU/s

// Distance band edges, UU. Close [0,500), Regular [500,1000),
// Medium [1000,1500), Far [1500, inf).
inline constexpr double kDistanceCloseEdge = 500.0;
inline constexpr double kDistanceRegularEdge = 1000.0;
inline constexpr double kDistanceMediumEdge = 1500.0;

// What the learner can measure about the nearest visible opponent,
// already translated into the learner's own viewing frame.
struct RelativeObservation {
  double vel_forward = 0.0;   // UU/s, + = moving along the bot's facing
  double vel_lateral = 0.0;   // UU/s, + = moving to the bot's right
  double facing_angle = 0.0;  // degrees in (-180, 180], 0 = same heading
  double distance = 0.0;      // UU, >= 0
};

struct StateKey {
  int velocity_bucket = 0;  // [0, 37)
  int rotation_sector = 0;  // [0, 8)
  int distance_band = 0;    // [0, 4)
  int index = 0;            // (velocity_bucket * 8 + rotation_sector) * 4 + distance_band

  bool operator==(const StateKey&) const = default;
};

// Velocity bucket ids: 0 is Stationary; moving buckets combine an F/B
// component with an L/R component, each at level 1..3.
int encode_velocity(double vel_forward, double vel_lateral);

// Sector ordinals, listed over (-180, 180]:
//   0 BL   [-180, -90)
//   1 F-L3 [ -90, -60)
//   2 F-L2 [ -60, -30)
//   3 F-L1 [ -30,   0)
//   4 F-R1 [   0,  30)
//   5 F-R2 [  30,  60)
//   6 F-R3 [  60,  90)
//   7 BR   [  90, 180]
// Throws std::invalid_argument outside (-180, 180].
int encode_rotation(double facing_angle_deg);

// Throws std::invalid_argument for negative distance.
int encode_distance(double distance);

// Throws std::out_of_range for out-of-range components.
StateKey compose_state(int velocity_bucket, int rotation_sector,
                       int distance_band);

// Inverse of compose_state. Throws std::out_of_range for a bad index.
StateKey decompose_state(int index);

// Full observation -> StateKey.
StateKey encode_observation(const RelativeObservation& obs);

}  // namespace marksman
