#pragma once

#include "marksman/geometry.hpp"

namespace marksman {

// 11 lateral x 4 vertical aim skews relative to the opponent's center.
inline constexpr int kActionGridWidth = 11;
inline constexpr int kActionGridHeight = 4;
inline constexpr int kActionCount = kActionGridWidth * kActionGridHeight;

// Lateral skews span -200..+200 UU in 40 UU steps; vertical skews run
// from the avatar's center (0) to just above the head of a 100 UU tall
// avatar (half-height 50).
inline constexpr double kLateralOffsetMax = 200.0;
inline constexpr double kLateralOffsetStep = 40.0;
inline constexpr double kVerticalOffsets[kActionGridHeight] = {0.0, 20.0, 40.0,
                                                               55.0};

struct AimAction {
  int x_index = kActionGridWidth / 2;  // dead-center default
  int z_index = 0;

  int id() const { return z_index * kActionGridWidth + x_index; }

  // Throws std::out_of_range for an invalid id.
  static AimAction from_id(int id);

  bool operator==(const AimAction&) const = default;
};

struct AimOffset {
  double dx = 0.0;  // UU, + = to the opponent's right in the bot's view
  double dz = 0.0;  // UU, up from the opponent's center
};

// Fixed grid offset for an action. Total over all 44 ids.
AimOffset action_offset(const AimAction& action);

// World-space point to shoot at: the opponent's center displaced dz
// vertically and dx along the horizontal axis perpendicular to the
// bot->opponent line. Recomputed every tick, so a persisted action tracks
// a moving opponent. Throws std::invalid_argument when bot and opponent
// are horizontally coincident (the viewing frame is undefined).
Vec3 aim_point(const Vec3& opponent_center, const Vec3& bot_position,
               const AimAction& action);

}  // namespace marksman
