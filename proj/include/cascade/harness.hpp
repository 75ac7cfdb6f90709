#pragma once

// Experiment orchestration: run each (policy, horizon) cell over seeded
// replications, charge per-slot expected regret analytically from the true
// parameters (clairvoyant harness, blind policy), checkpoint cumulative
// regret, and aggregate across runs.
//
// Seed derivation gives every run two independent splitmix64 streams. The
// environment seed depends only on (master seed, horizon index, run index)
// so all policies in a cell row face identical arm randomness (common
// random numbers); the policy seed additionally mixes in the policy index.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/env.hpp"
#include "cascade/policies.hpp"
#include "cascade/rng.hpp"

namespace cascade {

// Invalid experiment description (bad field values, unknown policy names).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ArmParams params;
  std::vector<std::int64_t> horizons;
  int runs = 1;
  std::uint64_t master_seed = 0;
  std::vector<std::string> policies;
  std::string checkpoint_schedule = "log";

  void validate() const {
    try {
      params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("params: ") + e.what());
    }
    if (horizons.empty()) throw ConfigError("horizons: must be nonempty");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      if (horizons[i] < 1) {
        throw ConfigError("horizons[" + std::to_string(i) + "]: must be >= 1");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (horizons[j] == horizons[i]) {
          throw ConfigError("horizons[" + std::to_string(i) + "]: duplicate value " +
                            std::to_string(horizons[i]));
        }
      }
    }
    if (runs < 1) throw ConfigError("runs: must be >= 1");
    if (policies.empty()) throw ConfigError("policies: must be nonempty");
    for (std::size_t i = 0; i < policies.size(); ++i) {
      if (!is_known_policy(policies[i])) {
        throw ConfigError("policies[" + std::to_string(i) + "]: unknown policy \"" +
                          policies[i] + "\"");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (policies[j] == policies[i]) {
          throw ConfigError("policies[" + std::to_string(i) + "]: duplicate \"" + policies[i] +
                            "\"");
        }
      }
    }
    parse_checkpoint_schedule(checkpoint_schedule);  // throws on bad spec
  }

  // "log" or "linear:<positive step>". Returns the linear step, or 0 for log.
  static std::int64_t parse_checkpoint_schedule(const std::string& spec) {
    if (spec == "log") return 0;
    constexpr std::string_view prefix = "linear:";
    if (spec.rfind(prefix, 0) == 0) {
      const std::string rest = spec.substr(prefix.size());
      std::int64_t step = 0;
      try {
        std::size_t used = 0;
        step = std::stoll(rest, &used);
        if (used != rest.size()) step = 0;
      } catch (const std::exception&) {
        step = 0;
      }
      if (step >= 1) return step;
    }
    throw ConfigError("checkpoint_schedule: expected \"log\" or \"linear:<step>\", got \"" +
                      spec + "\"");
  }
};

// Checkpoint slots for one horizon: either multiples of a linear step or a
// geometric grid of ratio 6/5 (exact integer arithmetic, so the grid is
// platform independent). The final slot T is always included.
inline std::vector<std::int64_t> make_checkpoints(const std::string& schedule,
                                                  std::int64_t horizon) {
  const std::int64_t step = ExperimentConfig::parse_checkpoint_schedule(schedule);
  std::vector<std::int64_t> ts;
  if (step > 0) {
    for (std::int64_t t = step; t < horizon; t += step) ts.push_back(t);
  } else {
    std::int64_t t = 1;
    while (t < horizon) {
      ts.push_back(t);
      t = std::max(t + 1, (t * 6 + 4) / 5);  // ceil(1.2 t)
    }
  }
  ts.push_back(horizon);
  return ts;
}

struct SeedPair {
  std::uint64_t env_seed = 0;
  std::uint64_t policy_seed = 0;
};

// Iterated avalanche mixing (splitmix64 finalizer) over the concatenated
// indices. env_seed deliberately ignores the policy index.
inline SeedPair derive_seeds(std::uint64_t master_seed, std::size_t policy_index,
                             std::size_t horizon_index, std::size_t run_index) {
  std::uint64_t env = mix64(master_seed ^ 0x656e766972ULL);  // "envir"
  env = mix64(env ^ static_cast<std::uint64_t>(horizon_index));
  env = mix64(env ^ static_cast<std::uint64_t>(run_index));

  std::uint64_t pol = mix64(master_seed ^ 0x706f6c696379ULL);  // "policy"
  pol = mix64(pol ^ static_cast<std::uint64_t>(policy_index));
  pol = mix64(pol ^ static_cast<std::uint64_t>(horizon_index));
  pol = mix64(pol ^ static_cast<std::uint64_t>(run_index));
  while (pol == env) pol = mix64(pol);
  return SeedPair{env, pol};
}

// Checkpointed cumulative expected regret for one run of one policy.
struct RegretTrajectory {
  std::vector<std::pair<std::int64_t, double>> checkpoints;

  double final_regret() const { return checkpoints.back().second; }

  double at(std::int64_t t) const {
    for (const auto& [slot, value] : checkpoints) {
      if (slot == t) return value;
    }
    throw std::invalid_argument("RegretTrajectory: no checkpoint at t=" + std::to_string(t));
  }
};

// Optional per-slot probe; receives each proposed ordering before the
// environment step. Used by replay/inspection tests, never by the CLI path.
using SlotObserver = std::function<void(std::int64_t t, const Ordering& proposed)>;

inline RegretTrajectory run_episode(Policy& policy, const ArmParams& params, std::int64_t horizon,
                                    std::uint64_t env_seed,
                                    std::span<const std::int64_t> checkpoints,
                                    const SlotObserver* observer = nullptr) {
  params.validate();
  if (horizon < 1) throw std::invalid_argument("run_episode: horizon must be >= 1");
  const double best = expected_reward(params, optimal_ordering(params));

  SplitMix64 env_rng(env_seed);
  SlotOutcome outcome;
  RegretTrajectory trajectory;
  trajectory.checkpoints.reserve(checkpoints.size());

  double cumulative = 0.0;
  std::size_t next_checkpoint = 0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const Ordering& proposed = policy.propose(t);
    if (observer) (*observer)(t, proposed);
    cumulative += std::max(0.0, best - expected_reward(params, proposed));
    step(params, proposed, env_rng, outcome);
    policy.observe(t, censor(outcome));
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
      trajectory.checkpoints.emplace_back(t, cumulative);
      ++next_checkpoint;
    }
  }
  return trajectory;
}

inline RegretTrajectory run_episode(std::string_view policy_name, const ArmParams& params,
                                    std::int64_t horizon, SeedPair seeds,
                                    std::span<const std::int64_t> checkpoints) {
  auto policy = make_policy(policy_name, params, horizon, seeds.policy_seed);
  return run_episode(*policy, params, horizon, seeds.env_seed, checkpoints);
}

struct AggregatePoint {
  std::int64_t t = 0;
  double mean = 0.0;
  double std_err = 0.0;
  int runs = 0;
};

struct AggregateCurve {
  std::vector<AggregatePoint> points;
  bool degenerate_stderr = false;  // single run: std_err pinned to 0
};

struct CellResult {
  std::string policy;
  std::int64_t horizon = 0;
  AggregateCurve curve;
};

struct ExperimentResults {
  std::vector<CellResult> cells;  // config order: policy-major, horizon-minor
};

namespace detail {

// Mean and sample-sd standard error accumulated in fixed run order, so the
// result is independent of how runs were scheduled.
inline AggregateCurve aggregate(const std::vector<RegretTrajectory>& runs) {
  AggregateCurve curve;
  const std::size_t n_points = runs.front().checkpoints.size();
  const auto n = static_cast<double>(runs.size());
  curve.degenerate_stderr = runs.size() == 1;
  curve.points.resize(n_points);
  for (std::size_t c = 0; c < n_points; ++c) {
    double sum = 0.0;
    for (const auto& run : runs) sum += run.checkpoints[c].second;
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& run : runs) {
      const double d = run.checkpoints[c].second - mean;
      sq += d * d;
    }
    const double std_err = runs.size() == 1 ? 0.0 : std::sqrt(sq / (n - 1.0) / n);
    curve.points[c] = AggregatePoint{runs.front().checkpoints[c].first, mean, std_err,
                                     static_cast<int>(runs.size())};
  }
  return curve;
}

}  // namespace detail

inline ExperimentResults run_experiment(const ExperimentConfig& config, unsigned n_threads = 1) {
  config.validate();
  const std::size_t n_policies = config.policies.size();
  const std::size_t n_horizons = config.horizons.size();
  const std::size_t n_runs = static_cast<std::size_t>(config.runs);
  const std::size_t n_cells = n_policies * n_horizons;

  std::vector<std::vector<std::int64_t>> checkpoints(n_horizons);
  for (std::size_t h = 0; h < n_horizons; ++h) {
    checkpoints[h] = make_checkpoints(config.checkpoint_schedule, config.horizons[h]);
  }

  std::vector<std::vector<RegretTrajectory>> trajectories(n_cells,
                                                          std::vector<RegretTrajectory>(n_runs));
  const std::size_t n_jobs = n_cells * n_runs;

  std::atomic<std::size_t> next_job{0};
  std::atomic<bool> failed{false};
  std::string failure_message;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next_job.fetch_add(1);
      if (job >= n_jobs || failed.load()) return;
      const std::size_t cell = job / n_runs;
      const std::size_t run = job % n_runs;
      const std::size_t p = cell / n_horizons;
      const std::size_t h = cell % n_horizons;
      try {
        const SeedPair seeds = derive_seeds(config.master_seed, p, h, run);
        trajectories[cell][run] = run_episode(config.policies[p], config.params,
                                              config.horizons[h], seeds, checkpoints[h]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failed.exchange(true)) {
          failure_message = "cell policy=" + config.policies[p] +
                            " T=" + std::to_string(config.horizons[h]) +
                            " run=" + std::to_string(run) + ": " + e.what();
        }
      }
    }
  };

  if (n_threads <= 1 || n_jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t count = std::min<std::size_t>(n_threads, n_jobs);
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error(failure_message);

  ExperimentResults results;
  results.cells.reserve(n_cells);
  for (std::size_t p = 0; p < n_policies; ++p) {
    for (std::size_t h = 0; h < n_horizons; ++h) {
      CellResult cell;
      cell.policy = config.policies[p];
      cell.horizon = config.horizons[h];
      cell.curve = detail::aggregate(trajectories[p * n_horizons + h]);
      results.cells.push_back(std::move(cell));
    }
  }
  return results;
}

}  // namespace cascade
