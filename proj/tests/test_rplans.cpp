#include <doctest.h>

#include <cmath>
#include <numbers>

#include "plans/errors.hpp"
#include "plans/harness.hpp"
#include "plans/rplans.hpp"
#include "support.hpp"

using namespace plans;

TEST_CASE("sample counts reduce to their constants when the logs are 1") {
  const double e = std::numbers::e;
  CHECK(column_sample_count(1.0, 2, 1, 1.0, 4.0 / e) == 100);
  CHECK(principal_sample_count(1.0, 1, 1.0, 2.0 / e) == 200);
}

TEST_CASE("sample counts against direct evaluation") {
  const double m1 = 100.0 * std::log(2.0 * 100 * 2 / 0.1) * std::max(std::pow(2.0, 2.5) / 0.1, 4.0 / 0.01);
  const double m2 = 200.0 * 3.0 * std::log(4.0 / 0.1) * std::max(8.0 / 0.1, 32.0 / 0.01);
  const SampleCounts s = sample_counts(1.0, 3.0, 100, 2, 0.1, 0.1);
  CHECK(s.m1 == static_cast<std::uint64_t>(std::ceil(m1)));
  CHECK(s.m2 == static_cast<std::uint64_t>(std::ceil(m2)));

  std::uint64_t prev = 0;
  for (double eps : {2.0, 1.0, 0.5, 0.2, 0.1, 0.05}) {
    const std::uint64_t m = sample_counts(1.0, 1.0, 50, 3, eps, 0.1).m1;
    CHECK(m > prev);
    prev = m;
  }
  CHECK(sample_counts(1e30, 1e30, 10, 5, 1e-6, 0.1).m1 == UINT64_MAX);
  CHECK_THROWS_AS(sample_counts(1, 1, 10, 2, 0.0, 0.1), ArgumentError);
  CHECK_THROWS_AS(sample_counts(1, 1, 10, 2, 0.1, 1.0), ArgumentError);
  CHECK_THROWS_AS(sample_counts(0, 1, 10, 2, 0.1, 0.1), ArgumentError);
}

TEST_CASE("taylor_precondition") {
  const DenseMatrix i2 = DenseMatrix::identity(2);
  CHECK(taylor_precondition(i2, DenseMatrix::from_rows({{1.4, 0}, {0, 1.0}})));
  CHECK_FALSE(taylor_precondition(i2, DenseMatrix::from_rows({{1.6, 0}, {0, 1.0}})));
  CHECK(taylor_precondition(DenseMatrix::from_rows({{2, 0}, {0, 2}}), DenseMatrix::from_rows({{2.9, 0}, {0, 2}})));
}

TEST_CASE("estimate_factors shares the principal block with the columns") {
  const LossMatrix l = gen_synthetic(12, 2, 3);
  StochasticOracle oracle(l, RngStream(9));
  const IndexSet sel{0, 5};
  const NystromFactors f = estimate_factors(oracle, sel, 40, 90);
  CHECK(f.c_hat.rows() == 12);
  CHECK(f.c_hat.cols() == 2);
  CHECK(f.w_hat == row_block(f.c_hat, sel));
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t b = 0; b < 2; ++b) {
      CHECK(f.c_counts[i * 2 + b] == (sel.contains(i) ? 90u : 40u));
    }
  }
  // 12 * 2 entries minus the duplicated (0, 5): 3 principal entries, 20 column entries.
  CHECK(oracle.stats().total_calls() == 3 * 90 + 20 * 40);
  CHECK_THROWS_AS(estimate_factors(oracle, IndexSet{}, 1, 1), ArgumentError);
  CHECK_THROWS_AS(estimate_factors(oracle, IndexSet{0, 12}, 1, 1), DimensionError);
}

TEST_CASE("run_rplans argument checks") {
  StochasticOracle oracle(gen_synthetic(5, 2, 1), RngStream(1));
  CHECK_THROWS_AS(run_rplans(oracle, 6, {}), ArgumentError);
  CHECK_THROWS_AS(run_rplans(oracle, 0, {}), ArgumentError);
  RPlansOptions bad;
  bad.eps = 0.0;
  CHECK_THROWS_AS(run_rplans(oracle, 2, bad), ArgumentError);
  RPlansBudgetOptions small;
  small.budget = 9;
  CHECK_THROWS_AS(run_rplans_budget(oracle, 2, small), ArgumentError);
}

TEST_CASE("rank one needs no elimination rounds") {
  const PopulationModel model({1.0}, {{0.1, 0.5, 0.7, 0.2, 0.9, 0.4, 0.3, 0.6, 0.8, 0.05}});
  StochasticOracle oracle(build_loss_matrix(model), RngStream(2));
  RPlansOptions opt;
  opt.per_entry_cap = 2000;
  const RPlansResult res = run_rplans(oracle, 1, opt);
  CHECK(res.selection_queries == 0);
  CHECK(res.factors.selected == IndexSet{0});
  const std::vector<double> sv = ref::singular_values(ref::from(res.l_hat));
  CHECK(sv[sv.size() - 2] <= 1e-9 * sv.back());
}

TEST_CASE("(eps, delta) mode accounting, sample targets and shape") {
  const LossMatrix l = gen_synthetic(20, 2, 8);
  StochasticOracle oracle(l, RngStream(3));
  RPlansOptions opt;
  opt.eps = 0.2;
  opt.per_entry_cap = 5000;
  const RPlansResult res = run_rplans(oracle, 2, opt);
  CHECK(res.queries == oracle.stats().total_calls());
  CHECK(res.queries == res.selection_queries + res.estimation_queries);
  CHECK(res.factors.selected.size() == 2);
  CHECK(res.factors.selected[0] == 0);
  CHECK(res.column_target <= opt.per_entry_cap);
  CHECK(res.principal_target <= opt.per_entry_cap);
  CHECK(res.capped == (std::max(res.required.m1, res.required.m2) > opt.per_entry_cap));
  for (std::uint64_t c : res.factors.c_counts) CHECK(c >= res.column_target);
  for (std::uint64_t c : res.factors.w_counts) CHECK(c >= res.principal_target);
  CHECK(is_symmetric(res.l_hat, 0.0));
  const std::vector<double> sv = ref::singular_values(ref::from(res.l_hat));
  CHECK(sv[sv.size() - 3] <= 1e-8 * sv.back());
}

TEST_CASE("determinism under a fixed seed") {
  const LossMatrix l = gen_synthetic(20, 2, 8);
  StochasticOracle a(l, RngStream(5)), b(l, RngStream(5));
  RPlansBudgetOptions opt;
  opt.budget = 50000;
  const RPlansResult ra = run_rplans_budget(a, 2, opt);
  const RPlansResult rb = run_rplans_budget(b, 2, opt);
  CHECK(ra.l_hat == rb.l_hat);
  CHECK(ra.queries == rb.queries);
  CHECK(ra.factors.selected == rb.factors.selected);
}

TEST_CASE("budget mode never exceeds the budget") {
  const LossMatrix l = gen_synthetic(25, 3, 6);
  for (std::uint64_t budget : {75ULL, 76ULL, 200ULL, 1000ULL, 10000ULL, 123457ULL}) {
    for (double split : {0.0, 0.3, 0.5, 0.9}) {
      StochasticOracle oracle(l, RngStream(budget));
      RPlansBudgetOptions opt;
      opt.budget = budget;
      opt.split = split;
      const RPlansResult res = run_rplans_budget(oracle, 3, opt);
      CHECK(res.queries <= budget);
      CHECK(res.queries == oracle.stats().total_calls());
      CHECK(res.queries == res.selection_queries + res.estimation_queries);
      CHECK(res.selection_queries <= static_cast<std::uint64_t>(split * static_cast<double>(budget)));
    }
  }
}

TEST_CASE("budget mode error shrinks as the budget doubles") {
  const LossMatrix l = gen_synthetic(20, 2, 12);
  std::vector<double> medians;
  for (std::uint64_t budget = 20000; budget <= 320000; budget *= 2) {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      StochasticOracle oracle(l, RngStream(derive_seed(budget, seed)));
      RPlansBudgetOptions opt;
      opt.budget = budget;
      errs.push_back(max_abs_diff(run_rplans_budget(oracle, 2, opt).l_hat, l.matrix()));
    }
    medians.push_back(median(errs));
  }
  for (std::size_t i = 1; i < medians.size(); ++i) CHECK(medians[i] <= medians[i - 1]);
}

TEST_CASE("large budget approaches the (eps, delta) output") {
  const LossMatrix l = gen_synthetic(20, 2, 13);
  StochasticOracle a(l, RngStream(1)), b(l, RngStream(2));
  RPlansBudgetOptions bopt;
  bopt.budget = 10000000;
  RPlansOptions eopt;
  eopt.eps = 0.2;
  const RPlansResult rb = run_rplans_budget(a, 2, bopt);
  const RPlansResult re = run_rplans(b, 2, eopt);
  CHECK(max_abs_diff(rb.l_hat, l.matrix()) < 0.05);
  CHECK(max_abs_diff(re.l_hat, l.matrix()) < 0.05);
  CHECK(max_abs_diff(rb.l_hat, re.l_hat) < 0.05);
}

TEST_CASE("loss gap stays within 2 eps whenever the max-norm bound holds") {
  const double eps = 0.2;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const LossMatrix l = gen_synthetic(20, 2, 100 + seed);
    StochasticOracle oracle(l, RngStream(seed));
    RPlansOptions opt;
    opt.eps = eps;
    const RPlansResult res = run_rplans(oracle, 2, opt);
    const DenseMatrix c = column_block(l.matrix(), res.factors.selected);
    const DenseMatrix exact = nystrom_extend(c, row_block(c, res.factors.selected));
    if (max_abs_diff(res.l_hat, exact) > eps) continue;
    const ref::Argmin best = ref::brute_force_min(ref::from(l.matrix()));
    CHECK(l(res.pair.i, res.pair.j) - best.value <= 2.0 * eps);
  }
}
