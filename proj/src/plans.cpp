#include "plans/plans.hpp"

#include <vector>

#include "plans/errors.hpp"

namespace plans {

namespace {

// Entries already revealed by the oracle. Repeat reads never reach the oracle.
class QueryCache {
 public:
  QueryCache(DeterministicOracle& oracle)
      : oracle_(oracle), k_(oracle.size()), known_(pair_count(k_), false),
        values_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(k_))) {}

  double get(std::size_t i, std::size_t j) {
    const std::size_t arm = pair_to_arm(i, j, k_);
    if (!known_[arm]) {
      const double v = oracle_.query(i, j);
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      values_(a, b) = v;
      values_(b, a) = v;
      known_[arm] = true;
      ++distinct_;
    }
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  std::uint64_t distinct() const { return distinct_; }

 private:
  DeterministicOracle& oracle_;
  std::size_t k_;
  std::vector<bool> known_;
  Eigen::MatrixXd values_;
  std::uint64_t distinct_ = 0;
};

}  // namespace

PlansResult run_plans(DeterministicOracle& oracle, const PlansOptions& options) {
  const std::size_t k = oracle.size();
  if (k == 0) throw DimensionError("run_plans: empty oracle");
  if (options.sigma_thresh < 0.0) throw ArgumentError("run_plans: sigma_thresh must be >= 0");
  if (options.rank_cap && *options.rank_cap == 0) throw ArgumentError("run_plans: rank_cap must be positive");

  QueryCache cache(oracle);
  PlansResult result;

  for (std::size_t i = 0; i < k; ++i) cache.get(i, 0);
  std::vector<std::size_t> accepted{0};

  for (std::size_t c = 1; c < k; ++c) {
    cache.get(c, c);

    // Every column in `accepted` is fully known, so the grown block needs no new queries.
    const auto n = static_cast<Eigen::Index>(accepted.size() + 1);
    Eigen::MatrixXd block(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      const std::size_t ia = a + 1 < n ? accepted[static_cast<std::size_t>(a)] : c;
      for (Eigen::Index b = 0; b < n; ++b) {
        const std::size_t ib = b + 1 < n ? accepted[static_cast<std::size_t>(b)] : c;
        block(a, b) = cache.get(ia, ib);
      }
    }
    const double s = sigma_min(block);
    const bool accept = s > options.sigma_thresh;
    result.log.push_back({c, s, accept});
    if (accept) {
      accepted.push_back(c);
      for (std::size_t i = 0; i < k; ++i) cache.get(i, c);
    }
    if (options.rank_cap && accepted.size() == *options.rank_cap) break;
  }

  result.selected = IndexSet(accepted);
  const auto kk = static_cast<Eigen::Index>(k);
  const auto s = static_cast<Eigen::Index>(accepted.size());
  Eigen::MatrixXd c_block(kk, s);
  for (Eigen::Index b = 0; b < s; ++b) {
    for (Eigen::Index i = 0; i < kk; ++i) {
      c_block(i, b) = cache.get(static_cast<std::size_t>(i), accepted[static_cast<std::size_t>(b)]);
    }
  }
  const DenseMatrix c_mat(std::move(c_block));
  const DenseMatrix w_mat = row_block(c_mat, result.selected);
  result.l_hat = nystrom_extend(c_mat, w_mat, options.pinv_tol);
  result.queries = cache.distinct();
  return result;
}

}  // namespace plans
