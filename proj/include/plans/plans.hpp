#pragma once

// Adaptive Nystrom sampling against a deterministic oracle.
//
// Column 0 is queried in full. Every later column c costs one diagonal query
// (c, c); it is accepted when the principal submatrix on the accepted set
// plus c is non-degenerate, and only then is the rest of the column queried.
// The matrix is imputed from the accepted columns by the Nystrom extension.
// For an SPSD matrix of rank r this recovers it exactly with at most K(r + 1)
// distinct oracle calls.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "plans/matrix.hpp"
#include "plans/reward_model.hpp"

namespace plans {

struct PlansOptions {
  /// Stop once this many columns are accepted; absent means unknown rank.
  std::optional<std::size_t> rank_cap;
  /// A column is accepted when sigma_min of the grown principal block exceeds this.
  double sigma_thresh = 1e-10;
  /// Relative cutoff of the pseudo-inverse used in the extension.
  double pinv_tol = 1e-12;
};

struct ColumnDecision {
  std::size_t column = 0;
  double sigma_min = 0.0;
  bool accepted = false;
};

struct PlansResult {
  DenseMatrix l_hat;
  IndexSet selected;
  /// Distinct oracle calls.
  std::uint64_t queries = 0;
  std::vector<ColumnDecision> log;
};

PlansResult run_plans(DeterministicOracle& oracle, const PlansOptions& options = {});

inline RankedPair recommend_pair(const PlansResult& result) { return optimal_pair(result.l_hat); }

}  // namespace plans
