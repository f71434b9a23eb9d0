#include "marksman/action_grid.hpp"

#include <stdexcept>
#include <string>

namespace marksman {

AimAction AimAction::from_id(int id) {
  if (id < 0 || id >= kActionCount) {
    throw std::out_of_range("action id " + std::to_string(id));
  }
  AimAction a;
  a.x_index = id % kActionGridWidth;
  a.z_index = id / kActionGridWidth;
  return a;
}

AimOffset action_offset(const AimAction& action) {
  if (action.x_index < 0 || action.x_index >= kActionGridWidth ||
      action.z_index < 0 || action.z_index >= kActionGridHeight) {
    throw std::out_of_range("action indices (" +
                            std::to_string(action.x_index) + ", " +
                            std::to_string(action.z_index) + ")");
  }
  AimOffset off;
  off.dx = -kLateralOffsetMax + kLateralOffsetStep * action.x_index;
  off.dz = kVerticalOffsets[action.z_index];
  return off;
}

Vec3 aim_point(const Vec3& opponent_center, const Vec3& bot_position,
               const AimAction& action) {
  const Vec3 to_opponent = (opponent_center - bot_position).horizontal();
  const double separation = to_opponent.norm();
  if (separation < 1e-9) {
    throw std::invalid_argument(
        "bot and opponent are horizontally coincident");
  }
  const Vec3 forward = to_opponent * (1.0 / separation);
  // Right-hand side of the bot's view: rotate forward 90 degrees clockwise
  // seen from above (Z up).
  const Vec3 right{forward.y, -forward.x, 0.0};
  const AimOffset off = action_offset(action);
  return opponent_center + right * off.dx + Vec3{0.0, 0.0, off.dz};
}

}  // namespace marksman
