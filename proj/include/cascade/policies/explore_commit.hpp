#pragma once

// Explore-and-Commit. Rotates a random initial ordering for N*K slots so
// every arm visits every cascade position, then freezes the ordering in
// ascending order of the lower confidence bounds L_i = p_hat_i -
// sqrt(2 log T / S_i). The exploration budget
//
//   N = max_{i >= 2} ceil(16 log T / (Delta_i^2 mu_i))
//
// is taken over the canonical p-ascending arm indexing; Delta_1 is not
// defined, so the max starts at i = 2. The policy is clairvoyant in
// (Delta, mu, T) by construction, per its inputs.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cascade/policies/counting.hpp"
#include "cascade/policies/policy.hpp"
#include "cascade/rng.hpp"

namespace cascade {

class ExploreCommitPolicy final : public Policy {
 public:
  // neighbor_deltas: the K-1 gaps Delta_i (i = 2..K) of the p-sorted
  // instance; mu: trigger probabilities in the same sorted order.
  ExploreCommitPolicy(std::vector<double> neighbor_deltas, std::vector<double> mu,
                      std::int64_t horizon, std::uint64_t seed)
      : arm_count_(static_cast<int>(mu.size())),
        horizon_(horizon),
        rng_(seed),
        counts_(arm_count_) {
    if (arm_count_ < 1) throw std::invalid_argument("ec: need at least one arm");
    if (horizon_ < 1) throw std::invalid_argument("ec: horizon must be >= 1");
    if (neighbor_deltas.size() + 1 != mu.size()) {
      throw std::invalid_argument("ec: expected K-1 gaps for K arms");
    }
    for (double m : mu) {
      if (!(m > 0.0)) throw std::invalid_argument("ec: mu entries must be positive");
    }
    for (double d : neighbor_deltas) {
      if (!(d > 0.0)) throw std::invalid_argument("ec: gaps must be positive");
    }
    log_horizon_ = std::log(static_cast<double>(horizon_));
    budget_ = exploration_budget(neighbor_deltas, mu, horizon_);
    explore_slots_ = budget_ > std::numeric_limits<std::int64_t>::max() / arm_count_
                         ? std::numeric_limits<std::int64_t>::max()
                         : budget_ * arm_count_;

    current_.slots = Ordering::identity(arm_count_).slots;
    rng_.shuffle(current_.slots);
    if (explore_slots_ == 0) commit();
  }

  // N. Public so tests and the acceptance harness can pin the commit slot.
  static std::int64_t exploration_budget(const std::vector<double>& neighbor_deltas,
                                         const std::vector<double>& mu, std::int64_t horizon) {
    const double log_t = std::log(static_cast<double>(horizon));
    double n = 0.0;
    for (std::size_t i = 0; i < neighbor_deltas.size(); ++i) {
      const double d = neighbor_deltas[i];
      n = std::max(n, std::ceil(16.0 * log_t / (d * d * mu[i + 1])));
    }
    if (n >= 9.0e18) return std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(n);
  }

  const Ordering& propose(std::int64_t) override { return current_; }

  void observe(std::int64_t t, const Observation& obs) override {
    if (obs.selected_arm) counts_.record(*obs.selected_arm, *obs.feedback);
    if (committed_) return;  // frozen; stats keep accumulating but the ordering does not move
    if (t < explore_slots_) {
      std::rotate(current_.slots.begin(), current_.slots.begin() + 1, current_.slots.end());
    } else if (t == explore_slots_) {
      commit();
    }
  }

  std::string_view name() const override { return "ec"; }

  std::int64_t budget() const { return budget_; }
  std::int64_t explore_slots() const { return explore_slots_; }
  bool committed() const { return committed_; }
  const Ordering* committed_ordering() const { return committed_ ? &current_ : nullptr; }
  const ErrorCounts& counts() const { return counts_; }

 private:
  void commit() {
    std::vector<double> lcb(static_cast<std::size_t>(arm_count_));
    for (int i = 0; i < arm_count_; ++i) {
      const auto a = static_cast<std::size_t>(i);
      lcb[a] = counts_.count[a] == 0
                   ? -std::numeric_limits<double>::infinity()
                   : counts_.p_hat[a] - confidence_width(log_horizon_, counts_.count[a]);
    }
    sort_arms_ascending(current_.slots, lcb);
    committed_ = true;
  }

  int arm_count_;
  std::int64_t horizon_;
  double log_horizon_ = 0.0;
  std::int64_t budget_ = 0;
  std::int64_t explore_slots_ = 0;
  SplitMix64 rng_;
  ErrorCounts counts_;
  Ordering current_;
  bool committed_ = false;
};

}  // namespace cascade
