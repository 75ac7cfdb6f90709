#pragma once

// Per-arm error statistics shared by the counting policies (EC, AE, LCB):
// observation counts S_i and the running mean p_hat_i of (1 - Y).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace cascade {

struct ErrorCounts {
  std::vector<std::int64_t> count;  // S_i
  std::vector<double> p_hat;        // mean of (1 - Y) over the S_i observations; 0 until first

  explicit ErrorCounts(int k)
      : count(static_cast<std::size_t>(k), 0), p_hat(static_cast<std::size_t>(k), 0.0) {}

  void record(int arm, int feedback) {
    const auto a = static_cast<std::size_t>(arm);
    count[a] += 1;
    const double miss = 1.0 - static_cast<double>(feedback);
    p_hat[a] += (miss - p_hat[a]) / static_cast<double>(count[a]);
  }

  std::int64_t total() const {
    std::int64_t sum = 0;
    for (auto c : count) sum += c;
    return sum;
  }
};

// Hoeffding-style half width sqrt(2 * log_term / S); infinite while S == 0.
inline double confidence_width(double log_term, std::int64_t observations) {
  if (observations <= 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(2.0 * log_term / static_cast<double>(observations));
}

// Arms ascending by (key, arm index). Used everywhere a deterministic
// total order over possibly tied keys is needed.
inline void sort_arms_ascending(std::vector<int>& arms, const std::vector<double>& key) {
  std::sort(arms.begin(), arms.end(), [&](int a, int b) {
    const double ka = key[static_cast<std::size_t>(a)];
    const double kb = key[static_cast<std::size_t>(b)];
    if (ka != kb) return ka < kb;
    return a < b;
  });
}

}  // namespace cascade
