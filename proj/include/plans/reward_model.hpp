#pragma once

// Population preference models and the oracles the algorithms query.
//
// A population is a mixture of r sub-populations. Sub-population k is picked
// with probability p_k and likes item i with probability u_k(i). Showing the
// pair (i, j) earns a reward of 1 when the user likes either item, so the
// expected loss of the pair is
//
//   L(i, j) = sum_k p_k (1 - u_k(i)) (1 - u_k(j)),
//
// a symmetric PSD matrix of rank at most r. The reward matrix is R = 11^T - L.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plans/matrix.hpp"
#include "plans/pair_index.hpp"
#include "plans/random.hpp"

namespace plans {

class PopulationModel {
 public:
  /// Validates p in the simplex (within 1e-12), every u_k in [0,1]^K with a
  /// common K >= 2, and r >= 1. Throws DataError otherwise.
  PopulationModel(std::vector<double> weights, std::vector<std::vector<double>> like_probabilities);

  std::size_t items() const { return likes_.front().size(); }
  std::size_t components() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::vector<double>>& like_probabilities() const { return likes_; }

 private:
  std::vector<double> weights_;
  std::vector<std::vector<double>> likes_;
};

/// K x K matrix of pair losses: symmetric, PSD and entries in [0, 1].
class LossMatrix {
 public:
  /// Throws DataError unless square, symmetric within 1e-12, entries in
  /// [0, 1] and smallest eigenvalue >= -1e-10.
  explicit LossMatrix(DenseMatrix m);

  std::size_t size() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const DenseMatrix& matrix() const { return m_; }

 private:
  DenseMatrix m_;
};

/// A pair (i <= j) together with the loss value used to rank it.
struct RankedPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

LossMatrix build_loss_matrix(const PopulationModel& model);

/// R = 11^T - L.
DenseMatrix build_reward_matrix(const LossMatrix& l);

/// Minimizer of m(i, j) over i <= j, diagonal included; ties go to the
/// lexicographically smallest (i, j).
RankedPair optimal_pair(const DenseMatrix& m);
inline RankedPair optimal_pair(const LossMatrix& l) { return optimal_pair(l.matrix()); }

/// One stochastic round: draw the sub-population, draw a like for each item,
/// return max of the two likes.
int simulate_round(const PopulationModel& model, std::size_t i, std::size_t j, RngStream& rng);

/// Oracle call counters keyed by unordered pair.
class OracleStats {
 public:
  explicit OracleStats(std::size_t items = 0) : items_(items), per_pair_(pair_count(items), 0) {}

  void record(std::size_t i, std::size_t j, std::uint64_t n = 1) {
    per_pair_[pair_to_arm(i, j, items_)] += n;
    total_ += n;
  }

  std::uint64_t total_calls() const { return total_; }
  std::uint64_t calls(std::size_t i, std::size_t j) const { return per_pair_[pair_to_arm(i, j, items_)]; }
  std::size_t items() const { return items_; }
  /// Counts in flat arm order (see pair_to_arm).
  const std::vector<std::uint64_t>& per_pair() const { return per_pair_; }

 private:
  std::size_t items_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> per_pair_;
};

/// Reveals L(i, j) exactly and counts every call.
class DeterministicOracle {
 public:
  /// `l` must be square and symmetric (within 1e-12).
  explicit DeterministicOracle(DenseMatrix l);
  explicit DeterministicOracle(const LossMatrix& l) : DeterministicOracle(l.matrix()) {}

  std::size_t size() const { return l_.rows(); }
  double query(std::size_t i, std::size_t j);
  const OracleStats& stats() const { return stats_; }

 private:
  DenseMatrix l_;
  OracleStats stats_;
};

/// Returns Bernoulli(L(i, j)) draws from its own random stream.
class StochasticOracle {
 public:
  /// `l` must be square, symmetric (within 1e-12) with entries in [0, 1].
  /// PSD is not required here, so the oracle also serves arbitrary
  /// symmetric probability tables.
  StochasticOracle(DenseMatrix l, RngStream rng);
  StochasticOracle(const LossMatrix& l, RngStream rng) : StochasticOracle(l.matrix(), std::move(rng)) {}

  std::size_t size() const { return l_.rows(); }
  int query(std::size_t i, std::size_t j);
  /// n queries of the same pair; returns the number of ones.
  std::uint64_t query_many(std::size_t i, std::size_t j, std::uint64_t n);
  const OracleStats& stats() const { return stats_; }

 private:
  void check(std::size_t i, std::size_t j) const;

  DenseMatrix l_;
  RngStream rng_;
  OracleStats stats_;
};

}  // namespace plans
