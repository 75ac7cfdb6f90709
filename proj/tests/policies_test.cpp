#include "cascade/policies.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "cascade/env.hpp"
#include "cascade/oracle.hpp"
#include "test_util.hpp"

namespace cascade {
namespace {

const ArmParams kPaper{{0.85, 0.9, 0.95, 0.92, 0.87}, {0.1, 0.25, 0.4, 0.55, 0.7}};

Observation crafted(int arm, int feedback) {
  Observation obs;
  obs.selected_arm = arm;
  obs.feedback = feedback;
  return obs;
}

// --- shared contract -------------------------------------------------------

TEST(PolicyRegistry, KnownNames) {
  EXPECT_EQ(policy_names(), (std::vector<std::string>{"ec", "ae", "lcb", "ts"}));
  EXPECT_TRUE(is_known_policy("lcb"));
  EXPECT_FALSE(is_known_policy("ucb"));
  EXPECT_THROW(make_policy("ucb", kPaper, 100, 1), std::invalid_argument);
}

TEST(PolicyContract, ValidPermutationEverySlotAndCountsMatchSelections) {
  for (const auto& name : policy_names()) {
    auto policy = make_policy(name, kPaper, 2000, 99);
    SplitMix64 env_rng(1234);
    SlotOutcome outcome;
    std::int64_t selected_slots = 0;
    std::vector<std::int64_t> per_arm(5, 0);
    for (std::int64_t t = 1; t <= 2000; ++t) {
      const Ordering& proposed = policy->propose(t);
      ASSERT_TRUE(detail::is_permutation_of(proposed.slots, 5)) << name << " slot " << t;
      step(kPaper, proposed, env_rng, outcome);
      if (outcome.selected) {
        ++selected_slots;
        per_arm[static_cast<std::size_t>(outcome.selected->arm)] += 1;
      }
      policy->observe(t, censor(outcome));
    }
    if (name == "ec") {
      const auto& counts = dynamic_cast<ExploreCommitPolicy&>(*policy).counts();
      EXPECT_EQ(counts.total(), selected_slots) << name;
    } else if (name == "ae") {
      const auto& counts = dynamic_cast<ActionEliminationPolicy&>(*policy).counts();
      EXPECT_EQ(counts.total(), selected_slots) << name;
    } else if (name == "lcb") {
      const auto& counts = dynamic_cast<LcbPolicy&>(*policy).counts();
      EXPECT_EQ(counts.total(), selected_slots) << name;
    } else {
      const auto& ts = dynamic_cast<ThompsonPolicy&>(*policy);
      for (int i = 0; i < 5; ++i) {
        const auto a = static_cast<std::size_t>(i);
        EXPECT_EQ(ts.alphas()[a] + ts.betas()[a] - 2, per_arm[a]) << name << " arm " << i;
      }
    }
  }
}

TEST(ConfidenceWidth, FormulaAndSentinel) {
  EXPECT_NEAR(confidence_width(1.0, 4), std::sqrt(0.5), 1e-15);  // ~0.70711
  EXPECT_NEAR(confidence_width(std::log(50000.0), 100), std::sqrt(2.0 * std::log(50000.0) / 100.0),
              1e-15);
  EXPECT_TRUE(std::isinf(confidence_width(1.0, 0)));
}

// --- Explore and Commit ----------------------------------------------------

TEST(ExploreCommit, BudgetMatchesFormulaOnPaperInstance) {
  const NeighborGaps gaps = neighbor_gaps(kPaper);
  const std::int64_t n = ExploreCommitPolicy::exploration_budget(gaps.delta, kPaper.mu, 50000);
  // max_i ceil(16 log T / (Delta_i^2 mu_i)) over i in {2..K}; the minimizing
  // mu among those arms is 0.87.
  const auto expected = static_cast<std::int64_t>(
      std::ceil(16.0 * std::log(50000.0) / (0.15 * 0.15 * 0.87)));
  EXPECT_EQ(n, expected);
  EXPECT_EQ(n, 8844);
  EXPECT_LT(n * 5, 50000);  // the paper cell does reach its commit phase

  ExploreCommitPolicy policy(gaps.delta, kPaper.mu, 50000, 3);
  EXPECT_EQ(policy.budget(), 8844);
  EXPECT_EQ(policy.explore_slots(), 44220);
  EXPECT_FALSE(policy.committed());
}

TEST(ExploreCommit, RotatesThroughExplorationThenFreezes) {
  // mu = 1 makes the head arm always selected; p in {0,1} makes feedback
  // deterministic, so the commit decision is fully scripted.
  const ArmParams params{{1.0, 1.0}, {0.0, 1.0}};
  const NeighborGaps gaps = neighbor_gaps(params);
  ExploreCommitPolicy policy(gaps.delta, {1.0, 1.0}, 1000000, 11);
  const std::int64_t explore = policy.explore_slots();
  ASSERT_LT(explore, 1000000);

  SplitMix64 env_rng(42);
  SlotOutcome outcome;
  Ordering previous = policy.propose(1);
  for (std::int64_t t = 1; t <= explore; ++t) {
    const Ordering proposed = policy.propose(t);
    if (t > 1) {
      Ordering rotated = previous;
      std::rotate(rotated.slots.begin(), rotated.slots.begin() + 1, rotated.slots.end());
      ASSERT_EQ(proposed, rotated) << "slot " << t;
    }
    previous = proposed;
    step(params, proposed, env_rng, outcome);
    policy.observe(t, censor(outcome));
  }
  ASSERT_TRUE(policy.committed());
  // p_hat_0 = 0 < p_hat_1 = 1 with equal observation counts: ascending LCB
  // commits to (0, 1).
  EXPECT_EQ(*policy.committed_ordering(), (Ordering{{0, 1}}));

  const Ordering committed = policy.propose(explore + 1);
  for (std::int64_t t = explore + 1; t <= explore + 200; ++t) {
    ASSERT_EQ(policy.propose(t), committed);
    step(params, committed, env_rng, outcome);
    policy.observe(t, censor(outcome));
  }
  EXPECT_EQ(policy.propose(explore + 201), committed);
}

TEST(ExploreCommit, NeverCommitsWhenBudgetExceedsHorizon) {
  const NeighborGaps gaps = neighbor_gaps(kPaper);
  ExploreCommitPolicy policy(gaps.delta, kPaper.mu, 5000, 21);
  EXPECT_GE(policy.explore_slots(), 5000);
  SplitMix64 env_rng(7);
  SlotOutcome outcome;
  Ordering second_to_last, last;
  for (std::int64_t t = 1; t <= 5000; ++t) {
    second_to_last = last;
    last = policy.propose(t);
    step(kPaper, last, env_rng, outcome);
    policy.observe(t, censor(outcome));
  }
  EXPECT_FALSE(policy.committed());
  EXPECT_NE(last, second_to_last);  // still rotating at the end of the horizon
}

TEST(ExploreCommit, ZeroBudgetCommitsToIndexOrderUnobserved) {
  // log(1) = 0 gives N = 0: no exploration slots, every arm unobserved,
  // sentinel ordering is ascending arm index.
  ExploreCommitPolicy policy({0.5, 0.5}, {0.5, 0.5, 0.5}, 1, 5);
  EXPECT_EQ(policy.explore_slots(), 0);
  ASSERT_TRUE(policy.committed());
  EXPECT_EQ(policy.propose(1), Ordering::identity(3));
}

TEST(ExploreCommit, RejectsNonPositiveInputs) {
  EXPECT_THROW(ExploreCommitPolicy({0.0}, {0.5, 0.5}, 100, 1), std::invalid_argument);
  EXPECT_THROW(ExploreCommitPolicy({0.5}, {0.0, 0.5}, 100, 1), std::invalid_argument);
  EXPECT_THROW(ExploreCommitPolicy({0.5}, {0.5, 0.5}, 0, 1), std::invalid_argument);
  EXPECT_THROW(ExploreCommitPolicy({0.5, 0.5}, {0.5, 0.5}, 100, 1), std::invalid_argument);
  EXPECT_THROW(make_policy("ec", ArmParams{{0.5, 0.5}, {0.3, 0.3}}, 100, 1),
               std::invalid_argument);  // tied p gives a zero gap
}

TEST(ExploreCommit, CommitsToOptimalOnPaperInstance) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto policy = make_policy("ec", kPaper, 50000, seed);
    auto& ec = dynamic_cast<ExploreCommitPolicy&>(*policy);
    SplitMix64 env_rng(seed * 1000 + 1);
    SlotOutcome outcome;
    for (std::int64_t t = 1; t <= ec.explore_slots(); ++t) {
      step(kPaper, policy->propose(t), env_rng, outcome);
      policy->observe(t, censor(outcome));
    }
    ASSERT_TRUE(ec.committed());
    EXPECT_EQ(*ec.committed_ordering(), Ordering::identity(5)) << "seed " << seed;
  }
}

// --- Action Elimination ----------------------------------------------------

TEST(ActionElimination, MutuallySeparatedPairLeavesTogether) {
  const ArmParams params{{1.0, 1.0}, {0.0, 1.0}};
  ActionEliminationPolicy policy(2, 100, 9);
  SplitMix64 env_rng(8);
  SlotOutcome outcome;
  int active_before_end = 2;
  for (std::int64_t t = 1; t <= 100; ++t) {
    const Ordering& proposed = policy.propose(t);
    step(params, proposed, env_rng, outcome);
    const int before = policy.active_count();
    policy.observe(t, censor(outcome));
    const int after = policy.active_count();
    ASSERT_LE(after, before);
    if (before == 2 && after != 2) {
      EXPECT_EQ(after, 0);  // disjointness is symmetric for a pair
      active_before_end = after;
    }
  }
  EXPECT_EQ(active_before_end, 0);
  ASSERT_TRUE(policy.commit_begin().has_value());
  EXPECT_EQ(policy.propose(101), (Ordering{{0, 1}}));
}

TEST(ActionElimination, UnobservedArmsAreNeverEliminated) {
  const ArmParams params{{0.0, 0.0, 0.0}, {0.1, 0.5, 0.9}};
  ActionEliminationPolicy policy(3, 1000, 4);
  SplitMix64 env_rng(12);
  SlotOutcome outcome;
  for (std::int64_t t = 1; t <= 300; ++t) {
    step(params, policy.propose(t), env_rng, outcome);
    policy.observe(t, censor(outcome));
    ASSERT_EQ(policy.active_count(), 3);  // infinite widths overlap everything
  }
  EXPECT_FALSE(policy.commit_begin().has_value());
}

TEST(ActionElimination, ActivePrefixRotatesAndInactiveTailSortsByLcb) {
  ActionEliminationPolicy policy(5, 50000, 77);
  SplitMix64 env_rng(13);
  SlotOutcome outcome;
  std::vector<int> previous_active = policy.active_list();
  for (std::int64_t t = 1; t <= 30000 && policy.active_count() > 1; ++t) {
    const Ordering& proposed = policy.propose(t);
    const auto& active = policy.active_list();
    const int a = static_cast<int>(active.size());
    // proposal = active rotation order followed by the settled arms
    for (int j = 0; j < a; ++j) {
      ASSERT_EQ(proposed.slots[static_cast<std::size_t>(j)], active[static_cast<std::size_t>(j)]);
    }
    std::vector<double> tail_lcb;
    for (int j = a; j < 5; ++j) {
      tail_lcb.push_back(policy.lower_bound(proposed.slots[static_cast<std::size_t>(j)]));
    }
    ASSERT_TRUE(std::is_sorted(tail_lcb.begin(), tail_lcb.end()));
    step(kPaper, proposed, env_rng, outcome);
    policy.observe(t, censor(outcome));
  }
}

TEST(ActionElimination, EliminationIsPermanentAndActiveCountMonotone) {
  ActionEliminationPolicy policy(5, 50000, 123);
  SplitMix64 env_rng(14);
  SlotOutcome outcome;
  int last_active = policy.active_count();
  std::vector<int> inactive_seen;
  for (std::int64_t t = 1; t <= 40000; ++t) {
    step(kPaper, policy.propose(t), env_rng, outcome);
    policy.observe(t, censor(outcome));
    ASSERT_LE(policy.active_count(), last_active);
    last_active = policy.active_count();
    for (int arm : inactive_seen) {
      const auto& active = policy.active_list();
      ASSERT_EQ(std::find(active.begin(), active.end(), arm), active.end());
    }
    inactive_seen = policy.inactive_set();
  }
  EXPECT_LE(policy.active_count(), 1);  // paper instance separates well before T
}

TEST(ActionElimination, CommitPhaseRecomputesAscendingLcbEachSlot) {
  const ArmParams params{{1.0, 1.0}, {0.0, 1.0}};
  ActionEliminationPolicy policy(2, 200, 10);
  SplitMix64 env_rng(15);
  SlotOutcome outcome;
  for (std::int64_t t = 1; t <= 200; ++t) {
    const Ordering& proposed = policy.propose(t);
    if (policy.commit_begin() && t >= *policy.commit_begin()) {
      std::vector<double> lcb = {policy.lower_bound(proposed.slots[0]),
                                 policy.lower_bound(proposed.slots[1])};
      ASSERT_LE(lcb[0], lcb[1]);
    }
    step(params, proposed, env_rng, outcome);
    policy.observe(t, censor(outcome));
  }
  ASSERT_TRUE(policy.commit_begin().has_value());
}

TEST(ActionElimination, PostActiveOrderingIsOptimalOnPaperInstance) {
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    ActionEliminationPolicy policy(5, 50000, seed);
    SplitMix64 env_rng(seed + 500);
    SlotOutcome outcome;
    for (std::int64_t t = 1; t <= 50000; ++t) {
      const Ordering& proposed = policy.propose(t);
      if (policy.commit_begin() && t >= *policy.commit_begin()) {
        ASSERT_EQ(proposed, Ordering::identity(5)) << "seed " << seed << " slot " << t;
      }
      step(kPaper, proposed, env_rng, outcome);
      policy.observe(t, censor(outcome));
    }
    ASSERT_TRUE(policy.commit_begin().has_value()) << "seed " << seed;
  }
}

TEST(ActionElimination, RejectsBadInputs) {
  EXPECT_THROW(ActionEliminationPolicy(0, 100, 1), std::invalid_argument);
  EXPECT_THROW(ActionEliminationPolicy(3, 0, 1), std::invalid_argument);
}

// --- LCB --------------------------------------------------------------------

TEST(Lcb, AllArmsUnobservedGivesUniformRandomPermutation) {
  std::map<std::vector<int>, int> frequency;
  constexpr int trials = 3000;
  for (int seed = 0; seed < trials; ++seed) {
    LcbPolicy policy(3, static_cast<std::uint64_t>(seed));
    frequency[policy.propose(1).slots] += 1;
  }
  ASSERT_EQ(frequency.size(), 6u);
  const double expected = trials / 6.0;
  const double band = 4.0 * std::sqrt((1.0 / 6.0) * (5.0 / 6.0) * trials);
  for (const auto& [slots, count] : frequency) {
    EXPECT_NEAR(count, expected, band);
  }
}

TEST(Lcb, IncrementalMeanIsExactRunningAverage) {
  LcbPolicy policy(2, 3);
  policy.propose(1);
  policy.observe(1, crafted(0, 0));
  policy.propose(2);
  policy.observe(2, crafted(0, 1));
  policy.propose(3);
  policy.observe(3, crafted(0, 0));
  EXPECT_DOUBLE_EQ(policy.counts().p_hat[0], 2.0 / 3.0);
  EXPECT_EQ(policy.counts().count[0], 3);
}

TEST(Lcb, UnobservedArmsSortAheadOfObservedOnes) {
  LcbPolicy policy(4, 17);
  policy.propose(1);
  policy.observe(1, crafted(2, 1));  // arm 2 becomes the only observed arm
  for (std::int64_t t = 2; t < 10; ++t) {
    const Ordering& proposed = policy.propose(t);
    EXPECT_EQ(proposed.slots.back(), 2) << "slot " << t;
    policy.observe(t, Observation{});
  }
}

TEST(Lcb, LatePerSlotRegretBecomesNegligibleOnPaperInstance) {
  // The LCB ordering keeps refreshing under-sampled tail arms forever (the
  // adaptivity that buys constant regret), so the full permutation need not
  // settle; what must hold is that late slots cost almost nothing.
  LcbPolicy policy(5, 2025);
  SplitMix64 env_rng(606);
  SlotOutcome outcome;
  double late_regret = 0.0;
  int head_correct = 0;
  for (std::int64_t t = 1; t <= 5000; ++t) {
    const Ordering& proposed = policy.propose(t);
    if (t > 4000) {
      late_regret += per_slot_regret(kPaper, proposed);
      head_correct += proposed.slots.front() == 0 ? 1 : 0;
    }
    step(kPaper, proposed, env_rng, outcome);
    policy.observe(t, censor(outcome));
  }
  EXPECT_LT(late_regret / 1000.0, 0.02);  // mean suboptimal-ordering gap is ~0.3
  EXPECT_GT(head_correct, 950);           // the lowest-error arm leads almost always
}

TEST(Lcb, AdversarialFeedbackFlipsTheOrderingArbitrarilyLate) {
  LcbPolicy policy(2, 5);
  std::int64_t t = 1;
  // Burn-in: arm 0 looks perfect, arm 1 looks broken, equal counts.
  for (; t <= 100; ++t) {
    policy.propose(t);
    policy.observe(t, crafted(t % 2 == 1 ? 0 : 1, t % 2 == 1 ? 1 : 0));
  }
  for (std::int64_t s = 0; s < 100; ++s, ++t) {
    ASSERT_EQ(policy.propose(t), (Ordering{{0, 1}}));
    policy.observe(t, crafted(0, 1));
  }
  // Adversarial phase: arm 0 turns bad; the ordering must eventually flip,
  // i.e. the policy is never structurally frozen.
  bool flipped = false;
  for (std::int64_t s = 0; s < 200000 && !flipped; ++s, ++t) {
    if (policy.propose(t) == (Ordering{{1, 0}})) {
      flipped = true;
      break;
    }
    policy.observe(t, crafted(0, 0));
  }
  EXPECT_TRUE(flipped);
}

// --- Thompson sampling ------------------------------------------------------

TEST(Thompson, PosteriorUpdateMatchesFeedback) {
  ThompsonPolicy policy(5, 1);
  policy.propose(1);
  policy.observe(1, crafted(3, 0));
  EXPECT_EQ(policy.alphas()[3], 2);  // alpha += 1 - Y
  EXPECT_EQ(policy.betas()[3], 1);
  policy.propose(2);
  policy.observe(2, crafted(3, 1));
  EXPECT_EQ(policy.alphas()[3], 2);
  EXPECT_EQ(policy.betas()[3], 2);  // beta += Y
  policy.propose(3);
  policy.observe(3, Observation{});  // no selection, no update
  EXPECT_EQ(policy.alphas()[3], 2);
  EXPECT_EQ(policy.betas()[3], 2);
}

TEST(Thompson, UniformPriorProposesAllOrderingsUniformly) {
  ThompsonPolicy policy(5, 31337);
  std::map<std::vector<int>, int> frequency;
  constexpr int proposals = 10000;
  for (int t = 1; t <= proposals; ++t) {
    frequency[policy.propose(t).slots] += 1;
  }
  ASSERT_EQ(frequency.size(), 120u);  // all 5! orderings occur
  const double expected = proposals / 120.0;
  double chi_square = 0.0;
  for (const auto& [slots, count] : frequency) {
    const double d = count - expected;
    chi_square += d * d / expected;
  }
  // 0.001 critical value of chi^2 with 119 degrees of freedom.
  EXPECT_LT(chi_square, 172.42);
}

TEST(Thompson, PosteriorMeanTracksEmpiricalErrorRate) {
  ThompsonPolicy policy(2, 8);
  SplitMix64 feedback_rng(99);
  constexpr double true_p = 0.25;
  std::int64_t failures = 0;
  constexpr int n = 10000;
  for (int t = 1; t <= n; ++t) {
    policy.propose(t);
    const int y = feedback_rng.next_double() < 1.0 - true_p ? 1 : 0;
    failures += 1 - y;
    policy.observe(t, crafted(0, y));
  }
  const double posterior_mean =
      static_cast<double>(policy.alphas()[0]) /
      static_cast<double>(policy.alphas()[0] + policy.betas()[0]);
  EXPECT_NEAR(posterior_mean, true_p, 0.02);
  EXPECT_NEAR(posterior_mean, (static_cast<double>(failures) + 1.0) / (n + 2.0), 1e-12);
}

TEST(Thompson, AdversarialFeedbackFlipsTheOrderingArbitrarilyLate) {
  ThompsonPolicy policy(2, 2);
  std::int64_t t = 1;
  for (; t <= 80; ++t) {
    policy.propose(t);
    policy.observe(t, crafted(t % 2 == 1 ? 0 : 1, t % 2 == 1 ? 1 : 0));
  }
  int stable = 0;
  for (std::int64_t s = 0; s < 200; ++s, ++t) {
    stable += policy.propose(t) == (Ordering{{0, 1}}) ? 1 : 0;
    policy.observe(t, Observation{});
  }
  EXPECT_GT(stable, 190);  // posterior strongly favors arm 0 first
  bool flipped = false;
  for (std::int64_t s = 0; s < 50000 && !flipped; ++s, ++t) {
    if (policy.propose(t) == (Ordering{{1, 0}})) {
      flipped = true;
      break;
    }
    policy.observe(t, crafted(0, 0));
  }
  EXPECT_TRUE(flipped);
}

}  // namespace
}  // namespace cascade
