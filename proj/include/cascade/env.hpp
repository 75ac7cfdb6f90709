#pragma once

// One slot of the stochastic cascade: sample all trigger bits, locate the
// first triggering arm in the proposed ordering, sample its feedback, and
// censor the result down to what a policy is allowed to see.
//
// Draw schedule: every step consumes exactly K+1 uniforms from its stream,
// K trigger draws in arm-index order followed by one feedback draw that is
// consumed (and discarded) even when no arm triggers. Policies compared on
// the same seed therefore face identical arm randomness regardless of the
// orderings they propose.

#include <cstdint>
#include <optional>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/rng.hpp"

namespace cascade {

struct SelectedSlot {
  int arm = 0;        // arm index
  int position = 0;   // 0-based cascade position

  bool operator==(const SelectedSlot&) const = default;
};

// Full environment view of one slot.
struct SlotOutcome {
  std::vector<std::uint8_t> triggers;   // realized X_i, arm-indexed
  std::optional<SelectedSlot> selected; // first triggering arm; absent = no trigger
  std::optional<int> feedback;          // Y in {0,1}, present iff selected
  int reward = 0;                       // Y when selected, 0 otherwise
};

// Censored view forwarded to policies: the selected arm and its feedback,
// nothing else. Trigger bits of non-selected arms never leave the harness.
struct Observation {
  std::optional<int> selected_arm;
  std::optional<int> feedback;
};

inline void step(const ArmParams& params, const Ordering& ordering, SplitMix64& rng,
                 SlotOutcome& out) {
  detail::require_valid_pair(params, ordering);
  const int k = params.arm_count();

  out.triggers.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    out.triggers[static_cast<std::size_t>(i)] =
        rng.next_double() < params.mu[static_cast<std::size_t>(i)] ? 1 : 0;
  }

  out.selected.reset();
  for (int j = 0; j < k; ++j) {
    const int arm = ordering.arm_at(j);
    if (out.triggers[static_cast<std::size_t>(arm)]) {
      out.selected = SelectedSlot{arm, j};
      break;
    }
  }

  const double u = rng.next_double();  // always consumed, keeps slot cost at K+1 draws
  if (out.selected) {
    const int y = u < 1.0 - params.p[static_cast<std::size_t>(out.selected->arm)] ? 1 : 0;
    out.feedback = y;
    out.reward = y;
  } else {
    out.feedback.reset();
    out.reward = 0;
  }
}

inline SlotOutcome step(const ArmParams& params, const Ordering& ordering, SplitMix64& rng) {
  SlotOutcome out;
  step(params, ordering, rng, out);
  return out;
}

inline Observation censor(const SlotOutcome& outcome) {
  Observation obs;
  if (outcome.selected) {
    obs.selected_arm = outcome.selected->arm;
    obs.feedback = outcome.feedback;
  }
  return obs;
}

}  // namespace cascade
