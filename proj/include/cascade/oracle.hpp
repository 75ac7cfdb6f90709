#pragma once

// Independent ground-truth computations for tests and acceptance runs.
// Nothing here shares a code path with the closed-form reward or the
// optimal-ordering sort; that is the point.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "cascade/core.hpp"
#include "cascade/env.hpp"
#include "cascade/rng.hpp"

namespace cascade {

inline constexpr int kBruteForceArmLimit = 8;    // K! enumeration
inline constexpr int kExhaustiveArmLimit = 20;   // 2^K enumeration

// Argmax of expected_reward over all K! orderings; ties resolve to the
// lexicographically smallest ordering.
inline Ordering brute_force_optimal(const ArmParams& params) {
  params.validate();
  const int k = params.arm_count();
  if (k > kBruteForceArmLimit) {
    throw UnsupportedSizeError("brute_force_optimal: arm count " + std::to_string(k) +
                               " exceeds limit " + std::to_string(kBruteForceArmLimit));
  }
  Ordering perm = Ordering::identity(k);
  Ordering best = perm;
  double best_reward = expected_reward(params, perm);
  while (std::next_permutation(perm.slots.begin(), perm.slots.end())) {
    const double r = expected_reward(params, perm);
    if (r > best_reward) {
      best_reward = r;
      best = perm;
    }
  }
  return best;
}

// Reward by direct expectation over all 2^K trigger vectors:
//   sum_x P(x) * (1 - p[first triggering arm under the ordering]),
// with zero contribution from the all-zero vector.
inline double exhaustive_reward(const ArmParams& params, const Ordering& ordering) {
  detail::require_valid_pair(params, ordering);
  const int k = params.arm_count();
  if (k > kExhaustiveArmLimit) {
    throw UnsupportedSizeError("exhaustive_reward: arm count " + std::to_string(k) +
                               " exceeds limit " + std::to_string(kExhaustiveArmLimit));
  }
  double total = 0.0;
  const std::uint32_t n = 1u << k;
  for (std::uint32_t x = 0; x < n; ++x) {
    double prob = 1.0;
    for (int i = 0; i < k; ++i) {
      const double mu = params.mu[static_cast<std::size_t>(i)];
      prob *= (x >> i) & 1u ? mu : 1.0 - mu;
    }
    if (prob == 0.0) continue;
    for (int j = 0; j < k; ++j) {
      const int arm = ordering.arm_at(j);
      if ((x >> arm) & 1u) {
        total += prob * (1.0 - params.p[static_cast<std::size_t>(arm)]);
        break;
      }
    }
  }
  return total;
}

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t n = 0;
};

// Empirical mean reward over n simulated slots with a fixed ordering.
inline McEstimate monte_carlo_reward(const ArmParams& params, const Ordering& ordering,
                                     std::int64_t n, SplitMix64& rng) {
  if (n < 2) throw std::invalid_argument("monte_carlo_reward: need n >= 2");
  SlotOutcome outcome;
  std::int64_t successes = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    step(params, ordering, rng, outcome);
    successes += outcome.reward;
  }
  const double nd = static_cast<double>(n);
  const double mean = static_cast<double>(successes) / nd;
  // Bernoulli sample variance with the n-1 denominator.
  const double var = nd / (nd - 1.0) * mean * (1.0 - mean);
  return McEstimate{mean, std::sqrt(var / nd), n};
}

}  // namespace cascade
