#pragma once

// Anytime lower-confidence-bound policy. Each slot ranks arms in ascending
// order of L_i(t) = p_hat_i - sqrt(2 log t / S_i); no horizon input. Arms
// without a single feedback observation carry a sentinel of -infinity so
// they sort ahead of every observed arm, in a fresh random order each slot
// (the paper's random tie-breaking for fair initial sampling); ties among
// observed arms break by ascending arm index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cascade/policies/counting.hpp"
#include "cascade/policies/policy.hpp"
#include "cascade/rng.hpp"

namespace cascade {

class LcbPolicy final : public Policy {
 public:
  LcbPolicy(int arm_count, std::uint64_t seed)
      : arm_count_(arm_count), rng_(seed), counts_(arm_count) {
    if (arm_count_ < 1) throw std::invalid_argument("lcb: need at least one arm");
  }

  const Ordering& propose(std::int64_t t) override {
    const double log_t = std::max(0.0, std::log(static_cast<double>(t)));

    unexplored_.clear();
    explored_.clear();
    for (int i = 0; i < arm_count_; ++i) {
      (counts_.count[static_cast<std::size_t>(i)] == 0 ? unexplored_ : explored_).push_back(i);
    }
    rng_.shuffle(unexplored_);

    lcb_.resize(static_cast<std::size_t>(arm_count_));
    for (int i : explored_) {
      const auto a = static_cast<std::size_t>(i);
      lcb_[a] = counts_.p_hat[a] - confidence_width(log_t, counts_.count[a]);
    }
    sort_arms_ascending(explored_, lcb_);

    current_.slots = unexplored_;
    current_.slots.insert(current_.slots.end(), explored_.begin(), explored_.end());
    return current_;
  }

  void observe(std::int64_t, const Observation& obs) override {
    if (obs.selected_arm) counts_.record(*obs.selected_arm, *obs.feedback);
  }

  std::string_view name() const override { return "lcb"; }

  const ErrorCounts& counts() const { return counts_; }

 private:
  int arm_count_;
  SplitMix64 rng_;
  ErrorCounts counts_;
  Ordering current_;
  std::vector<int> unexplored_;
  std::vector<int> explored_;
  std::vector<double> lcb_;
};

}  // namespace cascade
