#pragma once

// Robust adaptive Nystrom sampling against a stochastic oracle.
//
// Column 0 is always selected. Each further column is chosen by successive
// elimination over the principal blocks (selected + {i}) with failure budget
// delta / (2r) per call. The selected columns C and their principal block W
// are then estimated by repeated sampling and the matrix is imputed as
// C_hat pinv(W_hat) C_hat^T.
//
// The per-entry sample counts m1 (columns) and m2 (principal block) depend on
// the unknown C and W through the constants C1, C2. They are evaluated on
// pilot estimates, and every count is capped at `per_entry_cap`.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "plans/matrix.hpp"
#include "plans/reward_model.hpp"

namespace plans {

struct SampleCounts {
  /// Samples per entry of the column block; saturates at UINT64_MAX.
  std::uint64_t m1 = 0;
  /// Samples per entry of the principal block; saturates at UINT64_MAX.
  std::uint64_t m2 = 0;
};

/// m1 = ceil(100 C1 log(2Kr/delta) max(r^{5/2}/eps, r^2/eps^2)).
std::uint64_t column_sample_count(double c1, std::size_t k, std::size_t r, double eps, double delta);
/// m2 = ceil(200 C2 log(2r/delta) max(r^3/eps, r^5/eps^2)).
std::uint64_t principal_sample_count(double c2, std::size_t r, double eps, double delta);

/// Both counts; requires eps > 0, delta in (0, 1) and c1, c2 > 0.
SampleCounts sample_counts(double c1, double c2, std::size_t k, std::size_t r, double eps, double delta);

/// True when ||W^{-1} (W_hat - W)||_2 <= 1/2, the condition under which the
/// first-order perturbation bound on W_hat^{-1} applies.
bool taylor_precondition(const DenseMatrix& w, const DenseMatrix& w_hat);

struct NystromFactors {
  IndexSet selected;
  DenseMatrix c_hat;  // K x r
  DenseMatrix w_hat;  // r x r, the rows of c_hat on `selected`
  /// Samples behind each c_hat entry, row-major K x r.
  std::vector<std::uint64_t> c_counts;
  /// Samples behind each w_hat entry, row-major r x r.
  std::vector<std::uint64_t> w_counts;
};

struct RPlansResult {
  DenseMatrix l_hat;
  RankedPair pair;  // value is the estimate l_hat(i, j)
  std::uint64_t queries = 0;
  std::uint64_t selection_queries = 0;
  std::uint64_t estimation_queries = 0;
  NystromFactors factors;
  /// Constants evaluated on the pilot estimates (infinite when W_hat is singular).
  NystromConstants constants;
  /// Counts before capping.
  SampleCounts required;
  /// Per-entry targets actually used.
  std::uint64_t column_target = 0;
  std::uint64_t principal_target = 0;
  std::uint64_t pilot_samples = 0;
  bool capped = false;
  /// Runtime estimate of taylor_precondition from W_hat and a Bernstein bound.
  bool taylor_condition_ok = true;
  std::vector<std::string> warnings;
};

struct RPlansOptions {
  double eps = 0.1;
  double delta = 0.1;
  std::uint64_t round_cap = 5000;
  std::uint64_t per_entry_cap = 100000;
  std::uint64_t min_pilot = 30;
  double pinv_tol = 1e-12;
};

struct RPlansBudgetOptions {
  std::uint64_t budget = 0;
  /// Fraction of the budget available to column selection.
  double split = 0.5;
  std::uint64_t round_cap = 5000;
  /// Failure probability handed to elimination and the diagnostics.
  double delta = 0.1;
  std::uint64_t min_pilot = 30;
  double pinv_tol = 1e-12;
};

/// Samples every entry {i, s}, s in `selected`: principal-block entries get
/// `principal_samples` draws, the rest `column_samples`.
NystromFactors estimate_factors(StochasticOracle& oracle, const IndexSet& selected,
                                std::uint64_t column_samples, std::uint64_t principal_samples);

/// (eps, delta) mode. Throws ArgumentError when r > K or r == 0.
RPlansResult run_rplans(StochasticOracle& oracle, std::size_t r, const RPlansOptions& options);

/// Fixed-budget mode; never spends more than options.budget oracle calls.
/// Throws ArgumentError when budget < K r.
RPlansResult run_rplans_budget(StochasticOracle& oracle, std::size_t r, const RPlansBudgetOptions& options);

}  // namespace plans
