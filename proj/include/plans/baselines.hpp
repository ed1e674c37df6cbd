#pragma once

// Pair-as-arm baselines. Each unordered pair (i <= j), diagonal included, is
// one arm of a K(K+1)/2-armed bandit whose reward is 1 - L(i, j); the arms
// are numbered by pair_to_arm.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "plans/pair_index.hpp"
#include "plans/reward_model.hpp"

namespace plans {

struct BaselineResult {
  /// Recommended pair; value is its empirical loss estimate.
  RankedPair pair;
  std::uint64_t queries = 0;
  /// Pulls per arm, in arm order.
  std::vector<std::uint64_t> pulls;
};

/// Splits the budget evenly over all pairs; leftover pulls go one each to the
/// lexicographically first pairs. Unpulled pairs count as loss 1.
BaselineResult naive_uniform(StochasticOracle& oracle, std::uint64_t budget);

struct LilUcbOptions {
  double epsilon = 0.01;
  double beta = 1.0;
  /// Confidence parameter; the radius uses omega = delta / 5.
  double delta = 0.1;
};

/// Anytime confidence radius (1 + beta)(1 + sqrt(eps)) sqrt(2 (1 + eps) log(log((1 + eps) n) / omega) / n).
/// The inner logarithm is floored at 1 so the radius is defined for small n.
double lil_radius(std::uint64_t n, const LilUcbOptions& options);

/// One pull per arm, then always the arm with the largest upper bound, until
/// the budget is spent. Requires budget >= K(K+1)/2.
BaselineResult lil_ucb(StochasticOracle& oracle, std::uint64_t budget, const LilUcbOptions& options = {});

struct PairwiseSeOptions {
  double eps = 0.01;
  double delta = 0.1;
  std::uint64_t round_cap = 100000;
  std::optional<std::uint64_t> query_cap;
};

/// Per-round radius sqrt(log(4 n t^2 / delta) / (2 t)) for n arms.
double pairwise_se_radius(std::uint64_t t, std::size_t arms, double delta);

/// Classical successive elimination over the pair-arms. Stops when one arm
/// survives, when the radius falls to eps / 2, or at a cap.
BaselineResult pairwise_se(StochasticOracle& oracle, const PairwiseSeOptions& options);

}  // namespace plans
