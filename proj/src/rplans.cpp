#include "plans/rplans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "plans/errors.hpp"
#include "plans/successive_elimination.hpp"

namespace plans {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_ceil(double x) {
  if (!(x < 1.8e19)) return kSaturated;
  return static_cast<std::uint64_t>(std::ceil(x));
}

void check_eps_delta(double eps, double delta) {
  if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must be in (0, 1)");
}

struct Selection {
  IndexSet selected;
  std::uint64_t queries = 0;
};

// Column 0 first, then one elimination run per additional column.
Selection select_columns(StochasticOracle& oracle, std::size_t r, double delta, std::uint64_t round_cap,
                         std::optional<std::uint64_t> per_phase_cap) {
  const std::uint64_t start = oracle.stats().total_calls();
  Selection out{IndexSet{0}, 0};
  std::vector<std::size_t> remaining;
  for (std::size_t i = 1; i < oracle.size(); ++i) remaining.push_back(i);

  SeOptions se;
  se.delta = delta / (2.0 * static_cast<double>(r));
  se.round_cap = round_cap;
  for (std::size_t t = 2; t <= r; ++t) {
    if (per_phase_cap) {
      // Unspent share of earlier phases rolls forward.
      const std::uint64_t spent = oracle.stats().total_calls() - start;
      se.query_cap = (t - 1) * *per_phase_cap - std::min(spent, (t - 1) * *per_phase_cap);
    }
    const SeResult res = run_se(out.selected, remaining, oracle, se);
    out.selected = out.selected.with(res.winner);
    remaining.erase(std::find(remaining.begin(), remaining.end(), res.winner));
  }
  out.queries = oracle.stats().total_calls() - start;
  return out;
}

// Sample store for the entries {i, s}, s selected. Entries inside the
// principal block appear once even though they sit in two columns.
class ColumnEstimator {
 public:
  ColumnEstimator(StochasticOracle& oracle, IndexSet selected)
      : oracle_(oracle), k_(oracle.size()), selected_(std::move(selected)),
        counts_(pair_count(k_), 0), sums_(pair_count(k_), 0) {
    for (std::size_t s : selected_) {
      for (std::size_t i = 0; i < k_; ++i) {
        const std::size_t arm = pair_to_arm(i, s, k_);
        if (std::find(entries_.begin(), entries_.end(), arm) == entries_.end()) {
          entries_.push_back(arm);
        }
      }
    }
  }

  std::size_t entry_count() const { return entries_.size(); }
  std::size_t principal_entry_count() const { return pair_count(selected_.size()); }

  bool in_principal(std::size_t arm) const {
    const ItemPair p = arm_to_pair(arm, k_);
    return selected_.contains(p.i) && selected_.contains(p.j);
  }

  void top_up(std::uint64_t column_target, std::uint64_t principal_target) {
    for (std::size_t arm : entries_) {
      const std::uint64_t target = in_principal(arm) ? principal_target : column_target;
      if (counts_[arm] < target) {
        const ItemPair p = arm_to_pair(arm, k_);
        const std::uint64_t n = target - counts_[arm];
        sums_[arm] += oracle_.query_many(p.i, p.j, n);
        counts_[arm] += n;
      }
    }
  }

  NystromFactors factors() const {
    const std::size_t r = selected_.size();
    NystromFactors f;
    f.selected = selected_;
    Eigen::MatrixXd c(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(r));
    f.c_counts.resize(k_ * r);
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t b = 0; b < r; ++b) {
        const std::size_t arm = pair_to_arm(i, selected_[b], k_);
        if (counts_[arm] == 0) throw InsufficientSamplesError("rplans: column entry without samples");
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) =
            static_cast<double>(sums_[arm]) / static_cast<double>(counts_[arm]);
        f.c_counts[i * r + b] = counts_[arm];
      }
    }
    f.c_hat = DenseMatrix(std::move(c));
    f.w_hat = row_block(f.c_hat, selected_);
    f.w_counts.resize(r * r);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) f.w_counts[a * r + b] = f.c_counts[selected_[a] * r + b];
    }
    return f;
  }

 private:
  StochasticOracle& oracle_;
  std::size_t k_;
  IndexSet selected_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> sums_;
  std::vector<std::size_t> entries_;
};

NystromConstants pilot_constants(const NystromFactors& f) {
  try {
    return c1_c2_constants(f.w_hat, f.c_hat);
  } catch (const SingularityError&) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
}

void finish(RPlansResult& out, const NystromFactors& f, double delta, double pinv_tol) {
  out.factors = f;
  out.l_hat = nystrom_extend(f.c_hat, f.w_hat, pinv_tol);
  out.pair = optimal_pair(out.l_hat);

  // Matrix-Bernstein bound on ||W_hat - W||_2 at the smallest principal count.
  const double r = static_cast<double>(f.selected.size());
  const double m = static_cast<double>(*std::min_element(f.w_counts.begin(), f.w_counts.end()));
  const double log_term = std::log(2.0 * r / delta);
  const double ew_bound = 2.0 * r / (3.0 * m) * log_term + std::sqrt(r * log_term / (2.0 * m));
  const double winv_two = norm(pseudo_inverse(f.w_hat, pinv_tol), NormKind::two);
  out.taylor_condition_ok = winv_two * ew_bound <= 0.5;
  if (!out.taylor_condition_ok) {
    std::ostringstream os;
    os << "perturbation condition ||W^-1 E_W||_2 <= 1/2 may fail (estimated " << winv_two * ew_bound
       << "); extension error bound not certified";
    out.warnings.push_back(os.str());
  }
}

void check_rank(std::size_t r, std::size_t k) {
  if (r == 0) throw ArgumentError("rplans: r must be positive");
  if (r > k) throw ArgumentError("rplans: r exceeds the number of items");
}

}  // namespace

std::uint64_t column_sample_count(double c1, std::size_t k, std::size_t r, double eps, double delta) {
  const double rr = static_cast<double>(r);
  const double log_term = std::log(2.0 * static_cast<double>(k) * rr / delta);
  return saturating_ceil(100.0 * c1 * log_term * std::max(std::pow(rr, 2.5) / eps, rr * rr / (eps * eps)));
}

std::uint64_t principal_sample_count(double c2, std::size_t r, double eps, double delta) {
  const double rr = static_cast<double>(r);
  const double log_term = std::log(2.0 * rr / delta);
  return saturating_ceil(200.0 * c2 * log_term * std::max(std::pow(rr, 3.0) / eps, std::pow(rr, 5.0) / (eps * eps)));
}

SampleCounts sample_counts(double c1, double c2, std::size_t k, std::size_t r, double eps, double delta) {
  check_eps_delta(eps, delta);
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw ArgumentError("sample_counts: constants must be positive");
  if (r == 0 || k == 0) throw ArgumentError("sample_counts: K and r must be positive");
  return {column_sample_count(c1, k, r, eps, delta), principal_sample_count(c2, r, eps, delta)};
}

bool taylor_precondition(const DenseMatrix& w, const DenseMatrix& w_hat) {
  const Eigen::MatrixXd e = w_hat.values() - w.values();
  return norm(Eigen::MatrixXd(inverse(w).values() * e), NormKind::two) <= 0.5;
}

NystromFactors estimate_factors(StochasticOracle& oracle, const IndexSet& selected,
                                std::uint64_t column_samples, std::uint64_t principal_samples) {
  if (selected.empty()) throw ArgumentError("estimate_factors: empty selection");
  if (column_samples == 0 || principal_samples == 0) {
    throw ArgumentError("estimate_factors: sample counts must be positive");
  }
  selected.check_bound(oracle.size());
  ColumnEstimator est(oracle, selected);
  est.top_up(column_samples, principal_samples);
  return est.factors();
}

RPlansResult run_rplans(StochasticOracle& oracle, std::size_t r, const RPlansOptions& options) {
  const std::size_t k = oracle.size();
  check_rank(r, k);
  check_eps_delta(options.eps, options.delta);
  const std::uint64_t start = oracle.stats().total_calls();

  RPlansResult out;
  const Selection sel = select_columns(oracle, r, options.delta, options.round_cap, std::nullopt);
  out.selection_queries = sel.queries;

  ColumnEstimator est(oracle, sel.selected);
  out.pilot_samples = std::min(options.min_pilot, options.per_entry_cap);
  est.top_up(out.pilot_samples, out.pilot_samples);
  out.constants = pilot_constants(est.factors());

  out.required.m1 = std::isfinite(out.constants.c1)
                        ? column_sample_count(out.constants.c1, k, r, options.eps, options.delta)
                        : kSaturated;
  out.required.m2 = std::isfinite(out.constants.c2)
                        ? principal_sample_count(out.constants.c2, r, options.eps, options.delta)
                        : kSaturated;
  const std::uint64_t principal = std::max(out.required.m1, out.required.m2);
  out.capped = principal > options.per_entry_cap;
  out.column_target = std::min(out.required.m1, options.per_entry_cap);
  out.principal_target = std::min(principal, options.per_entry_cap);
  est.top_up(out.column_target, out.principal_target);

  finish(out, est.factors(), options.delta, options.pinv_tol);
  out.queries = oracle.stats().total_calls() - start;
  out.estimation_queries = out.queries - out.selection_queries;
  return out;
}

RPlansResult run_rplans_budget(StochasticOracle& oracle, std::size_t r, const RPlansBudgetOptions& options) {
  const std::size_t k = oracle.size();
  check_rank(r, k);
  if (options.budget < static_cast<std::uint64_t>(k) * r) {
    throw ArgumentError("rplans: budget must be at least K * r");
  }
  if (!(options.split >= 0.0 && options.split < 1.0)) throw ArgumentError("rplans: split must be in [0, 1)");
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw ArgumentError("rplans: delta must be in (0, 1)");
  const std::uint64_t start = oracle.stats().total_calls();

  const std::uint64_t entries = static_cast<std::uint64_t>(k) * r - pair_count(r - 1);
  const std::uint64_t principal_entries = pair_count(r);
  const std::uint64_t column_entries = entries - principal_entries;

  RPlansResult out;
  std::optional<std::uint64_t> per_phase;
  if (r > 1) {
    const auto share = std::min(static_cast<std::uint64_t>(options.split * static_cast<double>(options.budget)),
                                options.budget - entries);
    per_phase = share / (r - 1);
  }
  const Selection sel = select_columns(oracle, r, options.delta, options.round_cap, per_phase);
  out.selection_queries = sel.queries;

  const std::uint64_t estimation_budget = options.budget - sel.queries;
  ColumnEstimator est(oracle, sel.selected);
  out.pilot_samples = std::max<std::uint64_t>(
      1, std::min(std::max(options.min_pilot, options.budget / (10 * k * r)), estimation_budget / entries));
  est.top_up(out.pilot_samples, out.pilot_samples);
  out.constants = pilot_constants(est.factors());

  // Small-eps limit of the m2 : m1 ratio; the eps^-2 terms dominate there.
  double ratio = 1.0;
  if (std::isfinite(out.constants.c1) && std::isfinite(out.constants.c2) && out.constants.c1 > 0.0) {
    const double rr = static_cast<double>(r);
    const double m1 = 100.0 * out.constants.c1 * std::log(2.0 * static_cast<double>(k) * rr / options.delta) * rr * rr;
    const double m2 = 200.0 * out.constants.c2 * std::log(2.0 * rr / options.delta) * std::pow(rr, 5.0);
    ratio = std::max(1.0, m2 / m1);
  }

  const double weighted = static_cast<double>(column_entries) + ratio * static_cast<double>(principal_entries);
  std::uint64_t column_target =
      std::max(out.pilot_samples, static_cast<std::uint64_t>(static_cast<double>(estimation_budget) / weighted));
  if (column_entries == 0) column_target = out.pilot_samples;
  const std::uint64_t principal_room = (estimation_budget - column_entries * column_target) / principal_entries;
  const std::uint64_t principal_target = std::max(
      out.pilot_samples,
      std::min(static_cast<std::uint64_t>(ratio * static_cast<double>(column_target)), principal_room));
  out.column_target = column_target;
  out.principal_target = principal_target;
  est.top_up(column_target, principal_target);

  finish(out, est.factors(), options.delta, options.pinv_tol);
  out.queries = oracle.stats().total_calls() - start;
  out.estimation_queries = out.queries - out.selection_queries;
  return out;
}

}  // namespace plans
