#pragma once

#include <optional>
#include <span>

#include "marksman/action_grid.hpp"
#include "marksman/rl_core.hpp"

namespace marksman {

// Persistent Action Selection: each fresh selection is held for `interval`
// consecutive ticks while the observed state keeps updating every tick.
struct PasState {
  std::optional<AimAction> current_action;
  int ticks_remaining = 0;  // always < interval
  int interval = 3;
};

// Returns the persisted action while the group is open, otherwise selects
// a fresh one epsilon-greedily from q_row and starts a new group. q_row is
// the row for the *current* tick's state, which may differ from the state
// the persisted action was selected in.
AimAction next_action(PasState& pas, std::span<const double> q_row,
                      double epsilon, Rng& rng);

// Clears the group so the next call selects fresh. Idempotent; called at
// shooting-period boundaries.
void reset(PasState& pas);

}  // namespace marksman
