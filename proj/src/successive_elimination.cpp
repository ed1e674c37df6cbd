#include "plans/successive_elimination.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plans/errors.hpp"

namespace plans {

SampleTable::SampleTable(std::size_t side)
    : side_(side), counts_(pair_count(side), 0), sums_(pair_count(side), 0) {}

std::size_t SampleTable::slot(std::size_t i, std::size_t j) const {
  if (i >= side_ || j >= side_) throw DimensionError("SampleTable: index out of range");
  return pair_to_arm(i, j, side_);
}

void SampleTable::add(std::size_t i, std::size_t j, std::uint64_t n, std::uint64_t ones) {
  if (ones > n) throw ArgumentError("SampleTable: more successes than samples");
  const std::size_t s = slot(i, j);
  counts_[s] += n;
  sums_[s] += ones;
}

std::uint64_t SampleTable::min_count() const {
  if (counts_.empty()) return 0;
  return *std::min_element(counts_.begin(), counts_.end());
}

DenseMatrix estimate_matrix(const SampleTable& table) {
  const auto p = static_cast<Eigen::Index>(table.side());
  Eigen::MatrixXd m(p, p);
  for (std::size_t i = 0; i < table.side(); ++i) {
    for (std::size_t j = i; j < table.side(); ++j) {
      const std::uint64_t n = table.count(i, j);
      if (n == 0) throw InsufficientSamplesError("estimate_matrix: entry without samples");
      const double v = static_cast<double>(table.sum(i, j)) / static_cast<double>(n);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return DenseMatrix(std::move(m));
}

double confidence_radius(const SampleTable& table, double delta_t) {
  if (!(delta_t > 0.0 && delta_t < 1.0)) throw ArgumentError("confidence_radius: delta_t must be in (0, 1)");
  const std::size_t p = table.side();
  if (p == 0) throw InsufficientSamplesError("confidence_radius: empty table");
  double reciprocal_sum = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const std::uint64_t n = table.count(i, j);
      if (n == 0) throw InsufficientSamplesError("confidence_radius: entry without samples");
      reciprocal_sum += 1.0 / static_cast<double>(n);
    }
  }
  return bernstein_radius(p, table.min_count(), reciprocal_sum, delta_t);
}

double bernstein_radius(std::size_t p, std::uint64_t min_count, double reciprocal_sum, double delta_t) {
  if (min_count == 0) throw InsufficientSamplesError("bernstein_radius: zero count");
  const double log_term = std::log(2.0 * static_cast<double>(p) / delta_t);
  return 2.0 * log_term / (3.0 * static_cast<double>(min_count)) + std::sqrt(log_term / 2.0 * reciprocal_sum);
}

double delta_schedule(std::uint64_t t, std::size_t m, double delta) {
  const double tt = static_cast<double>(t);
  return 6.0 * delta / (std::numbers::pi * std::numbers::pi * static_cast<double>(m) * tt * tt);
}

namespace {

// Sample bookkeeping for one elimination run. The block on the base set is
// shared; each candidate k owns the entries (b, k) for b in the base set and
// (k, k), stored in that order.
class EliminationState {
 public:
  EliminationState(const IndexSet& base, std::vector<std::size_t> candidates)
      : base_(base), candidates_(std::move(candidates)), shared_(base.size()),
        own_counts_(candidates_.size(), std::vector<std::uint64_t>(base.size() + 1, 0)),
        own_sums_(candidates_.size(), std::vector<std::uint64_t>(base.size() + 1, 0)) {
    survivors_.resize(candidates_.size());
    for (std::size_t k = 0; k < candidates_.size(); ++k) survivors_[k] = k;
  }

  std::size_t side() const { return base_.size() + 1; }
  std::uint64_t shared_cost() const { return pair_count(base_.size()); }
  std::uint64_t pass_cost() const { return shared_cost() + survivors_.size() * side(); }

  const std::vector<std::size_t>& survivors() const { return survivors_; }
  std::size_t candidate(std::size_t pos) const { return candidates_[pos]; }
  std::size_t candidate_count() const { return candidates_.size(); }

  void sample_pass(StochasticOracle& oracle) {
    for (std::size_t a = 0; a < base_.size(); ++a) {
      for (std::size_t b = a; b < base_.size(); ++b) {
        shared_.add(a, b, 1, static_cast<std::uint64_t>(oracle.query(base_[a], base_[b])));
      }
    }
    for (std::size_t pos : survivors_) {
      const std::size_t k = candidates_[pos];
      for (std::size_t a = 0; a < base_.size(); ++a) {
        own_counts_[pos][a] += 1;
        own_sums_[pos][a] += static_cast<std::uint64_t>(oracle.query(base_[a], k));
      }
      own_counts_[pos].back() += 1;
      own_sums_[pos].back() += static_cast<std::uint64_t>(oracle.query(k, k));
    }
  }

  SampleTable table(std::size_t pos) const {
    const std::size_t p = side();
    SampleTable t(p);
    for (std::size_t a = 0; a + 1 < p; ++a) {
      for (std::size_t b = a; b + 1 < p; ++b) t.add(a, b, shared_.count(a, b), shared_.sum(a, b));
      t.add(a, p - 1, own_counts_[pos][a], own_sums_[pos][a]);
    }
    t.add(p - 1, p - 1, own_counts_[pos].back(), own_sums_[pos].back());
    return t;
  }

  void keep_only(std::vector<std::size_t> survivors) { survivors_ = std::move(survivors); }

  // Position of the largest sigma_hat among survivors; ties resolve to the
  // smallest item index because survivors are kept in ascending order.
  std::size_t leader(const std::vector<double>& sigma_hat) const {
    std::size_t best = 0;
    for (std::size_t s = 1; s < survivors_.size(); ++s) {
      if (sigma_hat[s] > sigma_hat[best]) best = s;
    }
    return best;
  }

 private:
  IndexSet base_;
  std::vector<std::size_t> candidates_;
  SampleTable shared_;
  std::vector<std::vector<std::uint64_t>> own_counts_;
  std::vector<std::vector<std::uint64_t>> own_sums_;
  std::vector<std::size_t> survivors_;
};

std::vector<double> estimate_sigmas(const EliminationState& state) {
  std::vector<double> out;
  out.reserve(state.survivors().size());
  for (std::size_t pos : state.survivors()) out.push_back(sigma_min(estimate_matrix(state.table(pos))));
  return out;
}

}  // namespace

SeResult run_se(const IndexSet& base_set, std::span<const std::size_t> candidates,
                StochasticOracle& oracle, const SeOptions& options) {
  if (candidates.empty()) throw ArgumentError("run_se: empty candidate list");
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw ArgumentError("run_se: delta must be in (0, 1)");
  if (options.round_cap == 0) throw ArgumentError("run_se: round_cap must be positive");
  base_set.check_bound(oracle.size());

  std::vector<std::size_t> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("run_se: duplicate candidates");
  }
  for (std::size_t k : sorted) {
    if (k >= oracle.size()) throw DimensionError("run_se: candidate out of range");
    if (base_set.contains(k)) throw ArgumentError("run_se: candidate overlaps the base set");
  }

  const std::uint64_t start_calls = oracle.stats().total_calls();
  SeResult result;

  if (options.query_cap) {
    // Keep only as many candidates (in index order) as one initial pass can afford.
    const std::uint64_t shared = pair_count(base_set.size());
    const std::uint64_t per = base_set.size() + 1;
    const std::uint64_t cap = *options.query_cap;
    const std::uint64_t affordable = cap >= shared + per ? (cap - shared) / per : 0;
    if (affordable == 0) {
      result.winner = sorted.front();
      result.capped = true;
      result.survivors = {sorted.front()};
      return result;
    }
    if (affordable < sorted.size()) sorted.resize(affordable);
  }

  EliminationState state(base_set, sorted);
  const std::size_t m = state.candidate_count();
  state.sample_pass(oracle);
  std::uint64_t t = 1;

  while (state.survivors().size() > 1) {
    if (t > options.round_cap) {
      result.capped = true;
      break;
    }
    const double delta_t = delta_schedule(t, m, options.delta);
    const std::vector<double> sigma_hat = estimate_sigmas(state);
    const std::size_t lead = state.leader(sigma_hat);
    std::vector<double> radius;
    radius.reserve(sigma_hat.size());
    for (std::size_t pos : state.survivors()) radius.push_back(confidence_radius(state.table(pos), delta_t));

    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < sigma_hat.size(); ++s) {
      if (sigma_hat[lead] - sigma_hat[s] < radius[lead] + radius[s]) keep.push_back(state.survivors()[s]);
    }
    state.keep_only(std::move(keep));
    if (state.survivors().size() == 1) break;

    if (options.query_cap &&
        oracle.stats().total_calls() - start_calls + state.pass_cost() > *options.query_cap) {
      result.capped = true;
      break;
    }
    ++t;
    state.sample_pass(oracle);
  }

  const std::vector<double> sigma_hat = estimate_sigmas(state);
  const std::size_t lead = state.leader(sigma_hat);
  result.winner = state.candidate(state.survivors()[lead]);
  result.sigma_hat = sigma_hat[lead];
  result.rounds = t;
  result.queries = oracle.stats().total_calls() - start_calls;
  for (std::size_t pos : state.survivors()) result.survivors.push_back(state.candidate(pos));
  return result;
}

}  // namespace plans
