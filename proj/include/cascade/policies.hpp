#pragma once

// The four online policies behind the shared Policy interface, plus the
// name registry used for CLI/config selection.
//
// EC and AE are horizon-dependent (their widths use log T); LCB and TS are
// anytime. EC is additionally clairvoyant in the true neighbor gaps and
// trigger probabilities, which the factory extracts from the instance.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/policies/action_elimination.hpp"
#include "cascade/policies/explore_commit.hpp"
#include "cascade/policies/lcb.hpp"
#include "cascade/policies/policy.hpp"
#include "cascade/policies/thompson.hpp"

namespace cascade {

inline const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = {"ec", "ae", "lcb", "ts"};
  return names;
}

inline bool is_known_policy(std::string_view name) {
  for (const auto& n : policy_names()) {
    if (n == name) return true;
  }
  return false;
}

inline std::unique_ptr<Policy> make_policy(std::string_view name, const ArmParams& params,
                                           std::int64_t horizon, std::uint64_t policy_seed) {
  const int k = params.arm_count();
  if (name == "ec") {
    const NeighborGaps gaps = neighbor_gaps(params);
    std::vector<double> mu_sorted(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      mu_sorted[static_cast<std::size_t>(i)] =
          params.mu[static_cast<std::size_t>(gaps.sorted_arms[static_cast<std::size_t>(i)])];
    }
    return std::make_unique<ExploreCommitPolicy>(gaps.delta, mu_sorted, horizon, policy_seed);
  }
  if (name == "ae") return std::make_unique<ActionEliminationPolicy>(k, horizon, policy_seed);
  if (name == "lcb") return std::make_unique<LcbPolicy>(k, policy_seed);
  if (name == "ts") return std::make_unique<ThompsonPolicy>(k, policy_seed);
  throw std::invalid_argument("unknown policy name: " + std::string(name));
}

}  // namespace cascade
