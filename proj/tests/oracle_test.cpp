#include "cascade/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"

namespace cascade {
namespace {

const ArmParams kPaper{{0.85, 0.9, 0.95, 0.92, 0.87}, {0.1, 0.25, 0.4, 0.55, 0.7}};

TEST(BruteForceOptimal, PaperInstanceIsIdentity) {
  EXPECT_EQ(brute_force_optimal(kPaper), Ordering::identity(5));
}

TEST(BruteForceOptimal, SortsByErrorProbability) {
  const ArmParams params{{0.5, 0.5}, {0.3, 0.1}};
  EXPECT_EQ(brute_force_optimal(params), (Ordering{{1, 0}}));
}

TEST(BruteForceOptimal, ArgmaxDominatesEveryOrdering) {
  SplitMix64 rng(1234);
  const ArmParams params = testing::random_params(rng, 4);
  const double best = expected_reward(params, brute_force_optimal(params));
  Ordering perm = Ordering::identity(4);
  do {
    EXPECT_GE(best, expected_reward(params, perm));
  } while (std::next_permutation(perm.slots.begin(), perm.slots.end()));
}

TEST(BruteForceOptimal, RejectsLargeArmCounts) {
  ArmParams params;
  params.mu.assign(9, 0.5);
  params.p.assign(9, 0.5);
  EXPECT_THROW(brute_force_optimal(params), UnsupportedSizeError);
}

TEST(ExhaustiveReward, SingleArmClosedForm) {
  const ArmParams params{{0.6}, {0.2}};
  EXPECT_NEAR(exhaustive_reward(params, Ordering::identity(1)), (1.0 - 0.2) * 0.6, 1e-15);
  EXPECT_NEAR(exhaustive_reward(params, Ordering::identity(1)),
              expected_reward(params, Ordering::identity(1)), 1e-15);
}

TEST(ExhaustiveReward, PaperInstanceIdentity) {
  const double oracle = exhaustive_reward(kPaper, Ordering::identity(5));
  EXPECT_NEAR(oracle, 0.87512616, 1e-8);
  EXPECT_NEAR(oracle, expected_reward(kPaper, Ordering::identity(5)), 1e-12);
}

TEST(ExhaustiveReward, CertainTriggersReduceToFirstArm) {
  const ArmParams params{{1.0, 1.0, 1.0}, {0.25, 0.5, 0.75}};
  EXPECT_NEAR(exhaustive_reward(params, Ordering{{1, 0, 2}}), 1.0 - 0.5, 1e-15);
  EXPECT_NEAR(exhaustive_reward(params, Ordering{{2, 1, 0}}), 1.0 - 0.75, 1e-15);
}

TEST(ExhaustiveReward, RejectsLargeArmCounts) {
  ArmParams params;
  params.mu.assign(21, 0.5);
  params.p.assign(21, 0.5);
  EXPECT_THROW(exhaustive_reward(params, Ordering::identity(21)), UnsupportedSizeError);
}

TEST(MonteCarloReward, DegenerateInstances) {
  SplitMix64 rng(5);
  const ArmParams zeros{{0.0, 0.0}, {0.5, 0.5}};
  const McEstimate none = monte_carlo_reward(zeros, Ordering::identity(2), 1000, rng);
  EXPECT_EQ(none.mean, 0.0);
  EXPECT_EQ(none.std_err, 0.0);
  EXPECT_EQ(none.n, 1000);

  const ArmParams sure{{1.0, 1.0}, {0.0, 0.0}};
  const McEstimate all = monte_carlo_reward(sure, Ordering::identity(2), 1000, rng);
  EXPECT_EQ(all.mean, 1.0);
  EXPECT_EQ(all.std_err, 0.0);
}

TEST(MonteCarloReward, RejectsTinySampleCounts) {
  SplitMix64 rng(5);
  EXPECT_THROW(monte_carlo_reward(kPaper, Ordering::identity(5), 1, rng), std::invalid_argument);
}

TEST(MonteCarloReward, PaperInstanceWithinThreeStandardErrors) {
  SplitMix64 rng(161803);
  const McEstimate est = monte_carlo_reward(kPaper, Ordering::identity(5), 1000000, rng);
  const double analytic = exhaustive_reward(kPaper, Ordering::identity(5));
  EXPECT_GT(est.std_err, 0.0);
  EXPECT_LE(std::abs(est.mean - analytic), 3.0 * est.std_err);
}

TEST(OracleProperties, TripleAgreementOnRandomInstances) {
  SplitMix64 rng(424242);
  int mc_within_four_se = 0;
  constexpr int trials = 15;
  for (int trial = 0; trial < trials; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(7));
    const ArmParams params = testing::random_params(rng, k);
    const Ordering ordering = testing::random_ordering(rng, k);
    const double closed = expected_reward(params, ordering);
    const double enumerated = exhaustive_reward(params, ordering);
    EXPECT_NEAR(closed, enumerated, 1e-12);
    const McEstimate mc = monte_carlo_reward(params, ordering, 100000, rng);
    if (std::abs(mc.mean - closed) <= 4.0 * mc.std_err) ++mc_within_four_se;
  }
  EXPECT_GE(mc_within_four_se, trials - 1);
}

}  // namespace
}  // namespace cascade
