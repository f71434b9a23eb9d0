#include "marksman/action_persistence.hpp"

namespace marksman {

AimAction next_action(PasState& pas, std::span<const double> q_row,
                      double epsilon, Rng& rng) {
  if (pas.ticks_remaining > 0 && pas.current_action.has_value()) {
    --pas.ticks_remaining;
    return *pas.current_action;
  }
  const int id = select_action(q_row, epsilon, rng);
  pas.current_action = AimAction::from_id(id);
  pas.ticks_remaining = pas.interval - 1;
  return *pas.current_action;
}

void reset(PasState& pas) {
  pas.current_action.reset();
  pas.ticks_remaining = 0;
}

}  // namespace marksman
