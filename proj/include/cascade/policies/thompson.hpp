#pragma once

// Thompson Sampling over the error probabilities. Each arm carries a
// Beta(alpha_i, beta_i) posterior starting from Beta(1, 1); a slot draws
// one posterior sample per arm (arm-index order) and plays the arms in
// ascending order of the sampled values. The selected arm's posterior is
// updated with its feedback: alpha += 1 - Y, beta += Y, so alpha_i - 1
// counts observed failures and alpha_i + beta_i - 2 counts observations.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cascade/policies/counting.hpp"
#include "cascade/policies/policy.hpp"
#include "cascade/rng.hpp"

namespace cascade {

class ThompsonPolicy final : public Policy {
 public:
  ThompsonPolicy(int arm_count, std::uint64_t seed)
      : arm_count_(arm_count),
        rng_(seed),
        alpha_(static_cast<std::size_t>(arm_count), 1),
        beta_(static_cast<std::size_t>(arm_count), 1) {
    if (arm_count_ < 1) throw std::invalid_argument("ts: need at least one arm");
    current_.slots = Ordering::identity(arm_count_).slots;
  }

  const Ordering& propose(std::int64_t) override {
    theta_.resize(static_cast<std::size_t>(arm_count_));
    for (int i = 0; i < arm_count_; ++i) {
      const auto a = static_cast<std::size_t>(i);
      theta_[a] = sample_beta(rng_, static_cast<double>(alpha_[a]), static_cast<double>(beta_[a]));
    }
    current_.slots = Ordering::identity(arm_count_).slots;
    sort_arms_ascending(current_.slots, theta_);
    return current_;
  }

  void observe(std::int64_t, const Observation& obs) override {
    if (!obs.selected_arm) return;
    const auto a = static_cast<std::size_t>(*obs.selected_arm);
    alpha_[a] += 1 - *obs.feedback;
    beta_[a] += *obs.feedback;
  }

  std::string_view name() const override { return "ts"; }

  const std::vector<std::int64_t>& alphas() const { return alpha_; }
  const std::vector<std::int64_t>& betas() const { return beta_; }

 private:
  int arm_count_;
  SplitMix64 rng_;
  std::vector<std::int64_t> alpha_;
  std::vector<std::int64_t> beta_;
  Ordering current_;
  std::vector<double> theta_;
};

}  // namespace cascade
