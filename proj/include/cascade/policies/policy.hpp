#pragma once

#include <cstdint>
#include <string_view>

#include "cascade/core.hpp"
#include "cascade/env.hpp"

namespace cascade {

// Behavioral contract shared by all online policies. The harness calls
// propose exactly once per slot, before observe for that slot. A policy
// sees the world only through the censored Observation it is handed.
class Policy {
 public:
  virtual ~Policy() = default;

  // Ordering to play in slot t (1-based). The reference stays valid until
  // the next propose/observe call on this instance.
  virtual const Ordering& propose(std::int64_t t) = 0;

  virtual void observe(std::int64_t t, const Observation& obs) = 0;

  virtual std::string_view name() const = 0;
};

}  // namespace cascade
