#pragma once

// Action Elimination. Maintains an active set of arms still being
// separated and an inactive set whose ranks are settled. Active arms are
// rotated round-robin at the head of the cascade; inactive arms trail in
// ascending order of their lower confidence bounds. An active arm is
// retired once its confidence interval [L_i, U_i] (half width
// sqrt(2 log T / S_i), infinite while unobserved) is disjoint from every
// other active arm's interval; retirement scans repeat within the slot
// until no further arm qualifies, so a mutually separated pair leaves
// together. Once at most one arm remains active, the full ordering is
// recomputed each slot as ascending L_i.

#include <algorithm>
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

class ActionEliminationPolicy final : public Policy {
 public:
  ActionEliminationPolicy(int arm_count, std::int64_t horizon, std::uint64_t seed)
      : arm_count_(arm_count), rng_(seed), counts_(arm_count) {
    if (arm_count_ < 1) throw std::invalid_argument("ae: need at least one arm");
    if (horizon < 1) throw std::invalid_argument("ae: horizon must be >= 1");
    log_horizon_ = std::log(static_cast<double>(horizon));

    current_.slots = Ordering::identity(arm_count_).slots;
    rng_.shuffle(current_.slots);
    active_list_ = current_.slots;
    if (active_count() <= 1) commit_begin_ = 1;
  }

  const Ordering& propose(std::int64_t) override { return current_; }

  void observe(std::int64_t t, const Observation& obs) override {
    if (obs.selected_arm) counts_.record(*obs.selected_arm, *obs.feedback);

    if (active_count() > 1) {
      eliminate_separated();
      if (active_count() > 1) {
        std::rotate(active_list_.begin(), active_list_.begin() + 1, active_list_.end());
        rebuild_active_phase_ordering();
        return;
      }
      commit_begin_ = t + 1;
    }
    // Commit phase: ascending L over all arms, recomputed from the stats
    // as they stand; inactive arms can still be observed.
    current_.slots = Ordering::identity(arm_count_).slots;
    sort_arms_ascending(current_.slots, lower_bounds());
  }

  std::string_view name() const override { return "ae"; }

  int active_count() const { return static_cast<int>(active_list_.size()); }
  const std::vector<int>& active_list() const { return active_list_; }
  const std::vector<int>& inactive_set() const { return inactive_; }
  // First slot proposed from the commit path, once the active phase ends.
  std::optional<std::int64_t> commit_begin() const { return commit_begin_; }
  const ErrorCounts& counts() const { return counts_; }

  double lower_bound(int arm) const {
    const auto a = static_cast<std::size_t>(arm);
    return counts_.p_hat[a] - confidence_width(log_horizon_, counts_.count[a]);
  }
  double upper_bound(int arm) const {
    const auto a = static_cast<std::size_t>(arm);
    return counts_.p_hat[a] + confidence_width(log_horizon_, counts_.count[a]);
  }

 private:
  std::vector<double> lower_bounds() const {
    std::vector<double> lcb(static_cast<std::size_t>(arm_count_));
    for (int i = 0; i < arm_count_; ++i) lcb[static_cast<std::size_t>(i)] = lower_bound(i);
    return lcb;
  }

  static bool disjoint(double lo_a, double hi_a, double lo_b, double hi_b) {
    return hi_a < lo_b || hi_b < lo_a;
  }

  void eliminate_separated() {
    while (active_list_.size() >= 2) {
      std::vector<int> separated;
      for (int j : active_list_) {
        bool apart_from_all = true;
        for (int i : active_list_) {
          if (i == j) continue;
          if (!disjoint(lower_bound(j), upper_bound(j), lower_bound(i), upper_bound(i))) {
            apart_from_all = false;
            break;
          }
        }
        if (apart_from_all) separated.push_back(j);
      }
      if (separated.empty()) return;
      for (int j : separated) {
        active_list_.erase(std::find(active_list_.begin(), active_list_.end(), j));
        inactive_.push_back(j);
      }
    }
  }

  void rebuild_active_phase_ordering() {
    current_.slots = active_list_;
    std::vector<int> tail = inactive_;
    sort_arms_ascending(tail, lower_bounds());
    current_.slots.insert(current_.slots.end(), tail.begin(), tail.end());
  }

  int arm_count_;
  double log_horizon_ = 0.0;
  SplitMix64 rng_;
  ErrorCounts counts_;
  Ordering current_;
  std::vector<int> active_list_;  // rotation order over the active set
  std::vector<int> inactive_;
  std::optional<std::int64_t> commit_begin_;
};

}  // namespace cascade
