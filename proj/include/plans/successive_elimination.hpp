#pragma once

// Successive elimination over principal submatrices that share a common left
// block. Candidate k owns the square matrix on base_set + {k} (k placed last);
// every round each surviving candidate's smallest singular value is
// re-estimated from Bernoulli samples, and candidates that are provably worse
// than the empirical leader under a matrix-Bernstein radius are dropped.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plans/matrix.hpp"
#include "plans/reward_model.hpp"

namespace plans {

/// Per-entry Bernoulli sample counts and sums of a symmetric p x p matrix,
/// stored once per unordered entry.
class SampleTable {
 public:
  explicit SampleTable(std::size_t side = 0);

  std::size_t side() const { return side_; }

  /// Adds `n` samples with `ones` successes to entry {i, j}.
  void add(std::size_t i, std::size_t j, std::uint64_t n, std::uint64_t ones);

  std::uint64_t count(std::size_t i, std::size_t j) const { return counts_[slot(i, j)]; }
  std::uint64_t sum(std::size_t i, std::size_t j) const { return sums_[slot(i, j)]; }
  std::uint64_t min_count() const;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::size_t side_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> sums_;
};

/// P_hat(i, j) = P_hat(j, i) = H(i, j) / n(i, j). Throws
/// InsufficientSamplesError when an entry has no samples.
DenseMatrix estimate_matrix(const SampleTable& table);

/// Matrix-Bernstein radius on ||P_hat - P||_2 at failure probability delta_t:
///   2 log(2p/delta_t) / (3 min n) + sqrt(log(2p/delta_t) / 2 * sum 1/n),
/// the sum running over all p^2 ordered entries.
double confidence_radius(const SampleTable& table, double delta_t);

/// The same radius from its ingredients: side p, the smallest count and the
/// sum of reciprocal counts over all p^2 entries.
double bernstein_radius(std::size_t p, std::uint64_t min_count, double reciprocal_sum, double delta_t);

/// 6 delta / (pi^2 m t^2); summed over all rounds and candidates it equals delta.
double delta_schedule(std::uint64_t t, std::size_t m, double delta);

struct SeOptions {
  double delta = 0.1;
  /// Hard stop on the number of rounds; the empirical leader is returned.
  std::uint64_t round_cap = 10000;
  /// Optional oracle budget. A sampling pass that would exceed it is not
  /// started and the empirical leader is returned.
  std::optional<std::uint64_t> query_cap;
};

struct SeResult {
  std::size_t winner = 0;
  std::uint64_t rounds = 0;
  std::uint64_t queries = 0;
  /// True when the loop ended by round_cap or query_cap rather than by
  /// eliminating all but one candidate.
  bool capped = false;
  std::vector<std::size_t> survivors;
  /// Winner's estimated sigma_min at exit.
  double sigma_hat = 0.0;
};

/// Runs elimination over `candidates` (disjoint from `base_set`). Samples of
/// the shared block are drawn once per round and shared by all candidates.
/// Throws ArgumentError on an empty candidate list or overlap with base_set.
SeResult run_se(const IndexSet& base_set, std::span<const std::size_t> candidates,
                StochasticOracle& oracle, const SeOptions& options);

}  // namespace plans
