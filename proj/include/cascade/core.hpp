#pragma once

// Deterministic cascade-reward mathematics. Everything in this header is a
// pure function of its inputs; no randomness, no shared state.
//
// The model: arms are placed in an ordering L = (l_1, ..., l_K). Arm l_i
// triggers independently with probability mu[l_i]; the first triggered arm
// serves the request and yields positive feedback with probability
// 1 - p[l_i]. The expected reward of an ordering is
//
//   r_L = sum_i (1 - p[l_i]) * mu[l_i] * prod_{j<i} (1 - mu[l_j]).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cascade {

// Thrown by enumeration-bounded operations (K! or 2^K scans) when the arm
// count exceeds their configured cap.
class UnsupportedSizeError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Problem instance: per-arm trigger probabilities mu[i] and error
// probabilities p[i]. No sortedness of p is assumed anywhere; sorted p is
// just the canonical instance the analysis uses.
struct ArmParams {
  std::vector<double> mu;
  std::vector<double> p;

  int arm_count() const { return static_cast<int>(mu.size()); }

  void validate() const {
    if (mu.empty() || mu.size() != p.size()) {
      throw std::invalid_argument("ArmParams: mu and p must have equal positive length");
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (!(mu[i] >= 0.0 && mu[i] <= 1.0)) {
        throw std::invalid_argument("ArmParams: mu[" + std::to_string(i) + "] out of range [0,1]");
      }
      if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
        throw std::invalid_argument("ArmParams: p[" + std::to_string(i) + "] out of range [0,1]");
      }
    }
  }
};

// A permutation of the arm indices {0..K-1}; slots[j] is the arm examined
// at cascade position j.
struct Ordering {
  std::vector<int> slots;

  int size() const { return static_cast<int>(slots.size()); }
  int arm_at(int pos) const { return slots[static_cast<std::size_t>(pos)]; }

  // Inverse lookup l^-1(arm); O(K).
  int position_of(int arm) const {
    for (int j = 0; j < size(); ++j) {
      if (slots[static_cast<std::size_t>(j)] == arm) return j;
    }
    throw std::invalid_argument("Ordering: arm not present");
  }

  static Ordering identity(int k) {
    Ordering o;
    o.slots.resize(static_cast<std::size_t>(k));
    std::iota(o.slots.begin(), o.slots.end(), 0);
    return o;
  }

  bool operator==(const Ordering& other) const = default;
};

namespace detail {

// Permutation check without per-call allocation for K <= 64.
inline bool is_permutation_of(const std::vector<int>& slots, int k) {
  if (static_cast<int>(slots.size()) != k) return false;
  if (k <= 64) {
    std::uint64_t seen = 0;
    for (int a : slots) {
      if (a < 0 || a >= k) return false;
      const std::uint64_t bit = 1ULL << a;
      if (seen & bit) return false;
      seen |= bit;
    }
    return true;
  }
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int a : slots) {
    if (a < 0 || a >= k || seen[static_cast<std::size_t>(a)]) return false;
    seen[static_cast<std::size_t>(a)] = 1;
  }
  return true;
}

inline void require_valid_pair(const ArmParams& params, const Ordering& ordering) {
  params.validate();
  if (!is_permutation_of(ordering.slots, params.arm_count())) {
    throw std::invalid_argument("Ordering: not a permutation of the instance's arms");
  }
}

}  // namespace detail

// r_L, evaluated in one pass with an incrementally maintained prefix
// product of (1 - mu).
inline double expected_reward(const ArmParams& params, const Ordering& ordering) {
  detail::require_valid_pair(params, ordering);
  double prefix = 1.0;
  double reward = 0.0;
  for (int arm : ordering.slots) {
    const auto a = static_cast<std::size_t>(arm);
    reward += (1.0 - params.p[a]) * params.mu[a] * prefix;
    prefix *= 1.0 - params.mu[a];
  }
  return reward;
}

// The static optimum: arms in ascending order of p, ties broken by
// ascending arm index. Any tie order is optimal since swapping equal-p
// neighbors leaves the reward unchanged.
inline Ordering optimal_ordering(const ArmParams& params) {
  params.validate();
  Ordering result = Ordering::identity(params.arm_count());
  std::sort(result.slots.begin(), result.slots.end(), [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    if (params.p[ia] != params.p[ib]) return params.p[ia] < params.p[ib];
    return a < b;
  });
  return result;
}

// Closed-form reward change from swapping the arms at positions pos and
// pos+1 (0-based):
//
//   r_L - r_swapped = prod_{j<pos}(1 - mu[l_j]) * mu[l_pos] * mu[l_pos+1]
//                     * (p[l_pos+1] - p[l_pos]).
//
// Positive iff the earlier arm has the strictly smaller error probability.
inline double adjacent_swap_delta(const ArmParams& params, const Ordering& ordering, int pos) {
  detail::require_valid_pair(params, ordering);
  if (pos < 0 || pos >= params.arm_count() - 1) {
    throw std::invalid_argument("adjacent_swap_delta: position out of range");
  }
  double prefix = 1.0;
  for (int j = 0; j < pos; ++j) {
    prefix *= 1.0 - params.mu[static_cast<std::size_t>(ordering.arm_at(j))];
  }
  const auto a = static_cast<std::size_t>(ordering.arm_at(pos));
  const auto b = static_cast<std::size_t>(ordering.arm_at(pos + 1));
  return prefix * params.mu[a] * params.mu[b] * (params.p[b] - params.p[a]);
}

// r_{L*} - r_L. Clamped at zero so that orderings attaining the optimal
// value report a gap of exactly 0 despite rounding.
inline double suboptimality_gap(const ArmParams& params, const Ordering& ordering) {
  const double best = expected_reward(params, optimal_ordering(params));
  return std::max(0.0, best - expected_reward(params, ordering));
}

// Harness-facing alias: the expected regret charged for proposing
// `ordering` in one slot.
inline double per_slot_regret(const ArmParams& params, const Ordering& ordering) {
  return suboptimality_gap(params, ordering);
}

// Gap statistics over the full permutation set.
//   per_arm[i] : worst gap among orderings starting with arm i
//   max        : worst gap overall
//   min        : smallest strictly positive gap (0 with degenerate_min set
//                when every ordering attains the optimum, e.g. K = 1)
struct GapStats {
  std::vector<double> per_arm;
  double max = 0.0;
  double min = 0.0;
  bool degenerate_min = false;
};

inline constexpr int kGapEnumerationLimit = 8;

inline GapStats gap_stats(const ArmParams& params, int enumeration_limit = kGapEnumerationLimit) {
  params.validate();
  const int k = params.arm_count();
  if (k > enumeration_limit) {
    throw UnsupportedSizeError("gap_stats: arm count " + std::to_string(k) +
                               " exceeds enumeration limit " + std::to_string(enumeration_limit));
  }
  const double best = expected_reward(params, optimal_ordering(params));

  GapStats stats;
  stats.per_arm.assign(static_cast<std::size_t>(k), 0.0);
  double min_positive = std::numeric_limits<double>::infinity();

  Ordering perm = Ordering::identity(k);
  do {
    const double gap = std::max(0.0, best - expected_reward(params, perm));
    auto& worst = stats.per_arm[static_cast<std::size_t>(perm.slots.front())];
    worst = std::max(worst, gap);
    if (gap > 0.0) min_positive = std::min(min_positive, gap);
  } while (std::next_permutation(perm.slots.begin(), perm.slots.end()));

  stats.max = *std::max_element(stats.per_arm.begin(), stats.per_arm.end());
  if (std::isinf(min_positive)) {
    stats.min = 0.0;
    stats.degenerate_min = true;
  } else {
    stats.min = min_positive;
  }
  return stats;
}

// Error-probability gaps over the canonically sorted instance.
//   sorted_arms : arms ascending by p (ties by index); position i holds the
//                 arm with the (i+1)-th smallest error probability
//   delta       : K-1 neighbor gaps, delta[i-1] = p_(i+1) - p_(i)
//   delta_prime : per-arm min neighbor gap, one-sided at the boundaries
// Both lists are empty for K = 1.
struct NeighborGaps {
  std::vector<int> sorted_arms;
  std::vector<double> delta;
  std::vector<double> delta_prime;
};

inline NeighborGaps neighbor_gaps(const ArmParams& params) {
  params.validate();
  const int k = params.arm_count();
  NeighborGaps gaps;
  gaps.sorted_arms = optimal_ordering(params).slots;
  if (k < 2) return gaps;

  std::vector<double> sorted_p(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    sorted_p[static_cast<std::size_t>(i)] = params.p[static_cast<std::size_t>(gaps.sorted_arms[static_cast<std::size_t>(i)])];
  }
  gaps.delta.resize(static_cast<std::size_t>(k - 1));
  for (int i = 0; i + 1 < k; ++i) {
    gaps.delta[static_cast<std::size_t>(i)] = sorted_p[static_cast<std::size_t>(i + 1)] - sorted_p[static_cast<std::size_t>(i)];
  }
  gaps.delta_prime.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double left = i > 0 ? sorted_p[static_cast<std::size_t>(i)] - sorted_p[static_cast<std::size_t>(i - 1)]
                              : std::numeric_limits<double>::infinity();
    const double right = i + 1 < k ? sorted_p[static_cast<std::size_t>(i + 1)] - sorted_p[static_cast<std::size_t>(i)]
                                   : std::numeric_limits<double>::infinity();
    gaps.delta_prime[static_cast<std::size_t>(i)] = std::min(left, right);
  }
  return gaps;
}

}  // namespace cascade
