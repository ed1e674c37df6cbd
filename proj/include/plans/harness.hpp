#pragma once

// Experiment plumbing: synthetic instances, rating ingestion, budget sweeps
// and Monte Carlo checks of the concentration bounds the algorithms rely on.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plans/matrix.hpp"
#include "plans/reward_model.hpp"

namespace plans {

/// Rank-r loss matrix L = A A^T / max(A A^T) with A uniform on [0,1]^{K x r}.
/// Redrawn (up to 100 times, each from a fresh stream derived from `seed`)
/// until the smallest entry is off the diagonal; throws DataError after that.
/// Requires 1 <= r <= K.
LossMatrix gen_synthetic(std::size_t k, std::size_t r, std::uint64_t seed);

/// Random mixture: weights drawn from the flat simplex, like-probabilities
/// uniform on [0, 1].
PopulationModel gen_population_model(std::size_t k, std::size_t r, std::uint64_t seed);

/// Population model from a binary users x K table and one label per user.
/// Groups follow `group_order` when given, otherwise order of first
/// appearance. Throws ArgumentError on a size mismatch, an empty table or a
/// listed group without users.
PopulationModel ingest_ratings(const std::vector<std::vector<int>>& ratings, const std::vector<std::string>& labels,
                               const std::optional<std::vector<std::string>>& group_order = std::nullopt);

/// Greedy column choice on a known matrix: column 0, then repeatedly the
/// column maximizing sigma_min of the enlarged principal block.
IndexSet greedy_sigma_columns(const DenseMatrix& l, std::size_t r);

struct SweepConfig {
  DenseMatrix loss;
  std::vector<std::string> algorithms;
  std::vector<std::uint64_t> budgets;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  std::size_t r = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

struct SweepRecord {
  std::string algorithm;
  std::size_t k = 0;
  std::size_t r = 0;
  std::uint64_t budget = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  /// L(i_hat, j_hat) - min L.
  double error = 0.0;
  std::uint64_t queries = 0;
  double wall_ms = 0.0;
};

/// Algorithms accepted by run_sweep: rplans, naive, lilucb, se.
const std::vector<std::string>& sweep_algorithms();

/// Pure function of its arguments.
std::uint64_t cell_seed(std::uint64_t master, const std::string& algorithm, std::uint64_t budget, std::size_t rep);

/// Throws ArgumentError on an unknown algorithm, budgets not strictly
/// increasing, zero repetitions or r outside [1, K]. Records come back
/// ordered by (algorithm as listed, budget, rep) whatever the thread count.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// CSV with header algorithm,K,r,budget,rep,seed,error,queries,wall_ms.
/// Without `timing` the wall_ms column is written as 0 so reruns match byte
/// for byte.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, bool timing);

struct BernsteinReport {
  std::size_t p = 0;
  std::uint64_t n = 0;
  double delta = 0.0;
  std::size_t trials = 0;
  double radius = 0.0;
  std::size_t spectral_violations = 0;
  std::size_t sigma_violations = 0;
  /// Trials where |sigma_min(P_hat) - sigma_min(P)| > ||P_hat - P||_2.
  std::size_t weyl_violations = 0;
  double spectral_fraction = 0.0;
  double sigma_fraction = 0.0;
  bool passed = false;
};

/// Fixed random p x p probability matrix P; each trial estimates every entry
/// independently from n Bernoulli samples and compares against the
/// matrix-Bernstein radius at failure probability delta.
BernsteinReport validate_bernstein(std::size_t p, std::uint64_t n, double delta, std::size_t trials,
                                   std::uint64_t seed);

/// 7 x 7 test table: base items {0, 1} with block [[0.9, 0.1], [0.1, 0.9]],
/// candidates 2..6 whose 3 x 3 principal blocks have well separated
/// sigma_min. Candidate 4 is the best.
DenseMatrix se_validation_instance();
inline constexpr std::size_t kSeValidationWinner = 4;

struct SeValidationReport {
  std::size_t trials = 0;
  std::size_t correct = 0;
  std::size_t capped = 0;
  double mean_queries = 0.0;
  std::vector<double> true_sigma;  // per candidate 2..6
  bool passed = false;             // correct >= (1 - delta) trials
};

SeValidationReport validate_se(double delta, std::size_t trials, std::uint64_t seed,
                               std::uint64_t round_cap = 200000);

struct NystromNoiseReport {
  std::size_t k = 0;
  std::size_t r = 0;
  std::size_t trials = 0;
  IndexSet selected;
  std::vector<std::uint64_t> m;
  std::vector<double> median_error;
  /// Least-squares slope of log(median error) against log(m); NaN with fewer
  /// than two distinct m.
  double slope = 0.0;
  bool passed = false;  // slope in [-0.7, -0.3]
};

/// Fixed synthetic instance from `seed`, columns chosen greedily on the true
/// matrix. For each m every column entry is estimated from m samples and the
/// extension is compared in max-norm against the exact extension. With
/// `exact` the true entries are used instead of samples.
NystromNoiseReport validate_nystrom_noise(std::size_t k, std::size_t r, const std::vector<std::uint64_t>& m_list,
                                          std::size_t trials, std::uint64_t seed, bool exact = false);

double median(std::vector<double> values);

}  // namespace plans
