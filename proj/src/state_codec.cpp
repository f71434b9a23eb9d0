#include "marksman/state_codec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace marksman {

namespace {

// Speed level 1..3 for one axis component.
int speed_level(double speed) {
  const double mag = std::fabs(speed);
  if (mag < kSpeedLevel2Edge) return 1;
  if (mag < kSpeedLevel3Edge) return 2;
  return 3;
}

}  // namespace

int encode_velocity(double vel_forward, double vel_lateral) {
  if (std::fmax(std::fabs(vel_forward), std::fabs(vel_lateral)) <
      kStationarySpeedThreshold) {
    return 0;
  }
  // Each axis is classified independently; a non-negative component maps
  // to Forward / Right so every moving state carries both components.
  const int fb = (vel_forward >= 0.0 ? 0 : 3) + (speed_level(vel_forward) - 1);
  const int lr = (vel_lateral >= 0.0 ? 0 : 3) + (speed_level(vel_lateral) - 1);
  return 1 + fb * 6 + lr;
}

int encode_rotation(double facing_angle_deg) {
  if (!(facing_angle_deg > -180.0 && facing_angle_deg <= 180.0)) {
    throw std::invalid_argument("facing angle " +
                                std::to_string(facing_angle_deg) +
                                " outside (-180, 180]");
  }
  if (facing_angle_deg < -90.0) return 0;  // BL
  if (facing_angle_deg < -60.0) return 1;  // F-L3
  if (facing_angle_deg < -30.0) return 2;  // F-L2
  if (facing_angle_deg < 0.0) return 3;    // F-L1
  if (facing_angle_deg < 30.0) return 4;   // F-R1
  if (facing_angle_deg < 60.0) return 5;   // F-R2
  if (facing_angle_deg < 90.0) return 6;   // F-R3
  return 7;                                // BR, includes 180
}

int encode_distance(double distance) {
  if (distance < 0.0 || std::isnan(distance)) {
    throw std::invalid_argument("negative distance " +
                                std::to_string(distance));
  }
  if (distance < kDistanceCloseEdge) return 0;
  if (distance < kDistanceRegularEdge) return 1;
  if (distance < kDistanceMediumEdge) return 2;
  return 3;
}

StateKey compose_state(int velocity_bucket, int rotation_sector,
                       int distance_band) {
  if (velocity_bucket < 0 || velocity_bucket >= kVelocityBuckets) {
    throw std::out_of_range("velocity bucket " +
                            std::to_string(velocity_bucket));
  }
  if (rotation_sector < 0 || rotation_sector >= kRotationSectors) {
    throw std::out_of_range("rotation sector " +
                            std::to_string(rotation_sector));
  }
  if (distance_band < 0 || distance_band >= kDistanceBands) {
    throw std::out_of_range("distance band " + std::to_string(distance_band));
  }
  StateKey key;
  key.velocity_bucket = velocity_bucket;
  key.rotation_sector = rotation_sector;
  key.distance_band = distance_band;
  key.index = (velocity_bucket * kRotationSectors + rotation_sector) *
                  kDistanceBands +
              distance_band;
  return key;
}

StateKey decompose_state(int index) {
  if (index < 0 || index >= kStateCount) {
    throw std::out_of_range("state index " + std::to_string(index));
  }
  const int distance_band = index % kDistanceBands;
  const int rest = index / kDistanceBands;
  return compose_state(rest / kRotationSectors, rest % kRotationSectors,
                       distance_band);
}

StateKey encode_observation(const RelativeObservation& obs) {
  return compose_state(encode_velocity(obs.vel_forward, obs.vel_lateral),
                       encode_rotation(obs.facing_angle),
                       encode_distance(obs.distance));
}

}  // namespace marksman
