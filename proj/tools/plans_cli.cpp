// Command-line front end. Exit codes: 0 success, 1 a validate-* check
// failed, 2 bad arguments, 3 bad or unusable input data.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plans/baselines.hpp"
#include "plans/errors.hpp"
#include "plans/harness.hpp"
#include "plans/io.hpp"
#include "plans/plans.hpp"
#include "plans/rplans.hpp"

namespace {

using nlohmann::json;
using namespace plans;

constexpr int kExitCheckFailed = 1;
constexpr int kExitArgument = 2;
constexpr int kExitData = 3;

json pair_json(const RankedPair& p) { return json::array({p.i, p.j}); }

json matrix_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json index_json(const IndexSet& s) {
  json out = json::array();
  for (std::size_t i : s) out.push_back(i);
  return out;
}

void write_json(const std::string& path, const json& j) { io::write_file(path, j.dump(2) + "\n"); }

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ArgumentError(std::string("empty entry in ") + what);
    if constexpr (std::is_same_v<T, std::string>) {
      out.push_back(item);
    } else {
      std::size_t used = 0;
      long double v = 0;
      try {
        v = std::stold(item, &used);
      } catch (const std::exception&) {
        throw ArgumentError(std::string("bad number in ") + what + ": " + item);
      }
      if (used != item.size() || v < 0 || v != static_cast<long double>(static_cast<T>(v))) {
        throw ArgumentError(std::string("bad number in ") + what + ": " + item);
      }
      out.push_back(static_cast<T>(v));
    }
  }
  if (out.empty()) throw ArgumentError(std::string("empty list: ") + what);
  return out;
}

struct GenArgs {
  std::size_t k = 0, r = 0;
  std::uint64_t seed = 0;
  std::string out, format = "matrix";
};

int cmd_gen(const GenArgs& a) {
  if (a.format == "model") {
    io::write_model_json(a.out, gen_population_model(a.k, a.r, a.seed));
  } else {
    io::write_matrix_csv(a.out, gen_synthetic(a.k, a.r, a.seed).matrix());
  }
  return 0;
}

struct PlansArgs {
  std::string matrix, out, stats;
  std::optional<std::size_t> r;
  double sigma_thresh = 1e-10;
};

int cmd_plans(const PlansArgs& a) {
  DeterministicOracle oracle(io::load_loss_matrix(a.matrix));
  PlansOptions opt;
  opt.rank_cap = a.r;
  opt.sigma_thresh = a.sigma_thresh;
  const PlansResult res = run_plans(oracle, opt);
  const RankedPair pair = recommend_pair(res);

  json decisions = json::array();
  for (const auto& d : res.log) {
    decisions.push_back({{"column", d.column}, {"sigma_min", d.sigma_min}, {"accepted", d.accepted}});
  }
  write_json(a.out, {{"pair", pair_json(pair)},
                     {"value_hat", pair.value},
                     {"queries", res.queries},
                     {"selected", index_json(res.selected)},
                     {"decisions", decisions},
                     {"l_hat", matrix_json(res.l_hat)}});

  const OracleStats& st = oracle.stats();
  json per_pair = json::array();
  for (std::size_t arm = 0; arm < st.per_pair().size(); ++arm) {
    if (st.per_pair()[arm] == 0) continue;
    const ItemPair p = arm_to_pair(arm, st.items());
    per_pair.push_back({{"i", p.i}, {"j", p.j}, {"calls", st.per_pair()[arm]}});
  }
  write_json(a.stats, {{"total_calls", st.total_calls()}, {"distinct_queries", res.queries}, {"per_pair", per_pair}});
  return 0;
}

struct RPlansArgs {
  std::string matrix, out;
  std::size_t r = 0;
  std::optional<double> eps, delta, split;
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 0;
  std::uint64_t round_cap = 5000;
  std::uint64_t per_entry_cap = 100000;
};

int cmd_rplans(const RPlansArgs& a) {
  if (a.budget && a.eps) throw ArgumentError("rplans: use either --eps/--delta or --budget");
  if (!a.budget && !(a.eps && a.delta)) throw ArgumentError("rplans: need --eps and --delta, or --budget");
  if (a.split && !a.budget) throw ArgumentError("rplans: --split needs --budget");

  const LossMatrix loss = io::load_loss_matrix(a.matrix);
  StochasticOracle oracle(loss, RngStream(a.seed));
  RPlansResult res;
  json mode;
  if (a.budget) {
    RPlansBudgetOptions opt;
    opt.budget = *a.budget;
    if (a.split) opt.split = *a.split;
    if (a.delta) opt.delta = *a.delta;
    opt.round_cap = a.round_cap;
    res = run_rplans_budget(oracle, a.r, opt);
    mode = {{"mode", "budget"}, {"budget", opt.budget}, {"split", opt.split}, {"delta", opt.delta}};
  } else {
    RPlansOptions opt;
    opt.eps = *a.eps;
    opt.delta = *a.delta;
    opt.round_cap = a.round_cap;
    opt.per_entry_cap = a.per_entry_cap;
    res = run_rplans(oracle, a.r, opt);
    mode = {{"mode", "eps_delta"}, {"eps", opt.eps}, {"delta", opt.delta}, {"per_entry_cap", opt.per_entry_cap}};
  }
  json constants = {{"c1", std::isfinite(res.constants.c1) ? json(res.constants.c1) : json(nullptr)},
                    {"c2", std::isfinite(res.constants.c2) ? json(res.constants.c2) : json(nullptr)}};
  write_json(a.out, {{"pair", pair_json(res.pair)},
                     {"value_hat", res.pair.value},
                     {"queries", res.queries},
                     {"selection_queries", res.selection_queries},
                     {"estimation_queries", res.estimation_queries},
                     {"selected", index_json(res.factors.selected)},
                     {"seed", a.seed},
                     {"settings", mode},
                     {"constants", constants},
                     {"m1", res.required.m1},
                     {"m2", res.required.m2},
                     {"column_samples", res.column_target},
                     {"principal_samples", res.principal_target},
                     {"pilot_samples", res.pilot_samples},
                     {"capped", res.capped},
                     {"taylor_condition_ok", res.taylor_condition_ok},
                     {"warnings", res.warnings}});
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

struct BaselineArgs {
  std::string algo, matrix, out;
  std::uint64_t budget = 0, seed = 0;
};

int cmd_baseline(const BaselineArgs& a) {
  const LossMatrix loss = io::load_loss_matrix(a.matrix);
  StochasticOracle oracle(loss, RngStream(a.seed));
  BaselineResult res;
  if (a.algo == "naive") {
    res = naive_uniform(oracle, a.budget);
  } else if (a.algo == "lilucb") {
    res = lil_ucb(oracle, a.budget);
  } else {
    PairwiseSeOptions opt;
    opt.query_cap = a.budget;
    res = pairwise_se(oracle, opt);
  }
  write_json(a.out, {{"algorithm", a.algo},
                     {"pair", pair_json(res.pair)},
                     {"value_hat", res.pair.value},
                     {"queries", res.queries},
                     {"budget", a.budget},
                     {"seed", a.seed}});
  return 0;
}

struct SweepArgs {
  std::string matrix, algos, budgets, out;
  std::size_t r = 0, reps = 0, threads = 0;
  std::uint64_t seed = 0;
  bool timing = false;
};

int cmd_sweep(const SweepArgs& a) {
  SweepConfig cfg;
  cfg.algorithms = parse_list<std::string>(a.algos, "--algos");
  cfg.budgets = parse_list<std::uint64_t>(a.budgets, "--budgets");
  cfg.repetitions = a.reps;
  cfg.seed = a.seed;
  cfg.r = a.r;
  cfg.threads = a.threads;
  cfg.loss = io::load_loss_matrix(a.matrix).matrix();
  const auto records = run_sweep(cfg);
  std::ostringstream os;
  write_sweep_csv(os, records, a.timing);
  io::write_file(a.out, os.str());
  return 0;
}

int emit_report(const json& report, const std::optional<std::string>& out, bool passed) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (out) io::write_file(*out, text);
  return passed ? 0 : kExitCheckFailed;
}

struct BernsteinArgs {
  std::size_t p = 0, trials = 0;
  std::uint64_t n = 0, seed = 0;
  double delta = 0.1;
  std::optional<std::string> out;
};

int cmd_validate_bernstein(const BernsteinArgs& a) {
  const BernsteinReport r = validate_bernstein(a.p, a.n, a.delta, a.trials, a.seed);
  return emit_report({{"p", r.p},
                      {"n", r.n},
                      {"delta", r.delta},
                      {"trials", r.trials},
                      {"seed", a.seed},
                      {"radius", r.radius},
                      {"spectral_violations", r.spectral_violations},
                      {"sigma_violations", r.sigma_violations},
                      {"weyl_violations", r.weyl_violations},
                      {"spectral_fraction", r.spectral_fraction},
                      {"sigma_fraction", r.sigma_fraction},
                      {"passed", r.passed}},
                     a.out, r.passed);
}

struct SeArgs {
  double delta = 0.1;
  std::size_t trials = 0;
  std::uint64_t seed = 0, round_cap = 200000;
  std::optional<std::string> out;
};

int cmd_validate_se(const SeArgs& a) {
  const SeValidationReport r = validate_se(a.delta, a.trials, a.seed, a.round_cap);
  return emit_report({{"delta", a.delta},
                      {"trials", r.trials},
                      {"seed", a.seed},
                      {"expected_winner", kSeValidationWinner},
                      {"true_sigma_min", r.true_sigma},
                      {"correct", r.correct},
                      {"capped", r.capped},
                      {"mean_queries", r.mean_queries},
                      {"passed", r.passed}},
                     a.out, r.passed);
}

struct NystromArgs {
  std::size_t k = 0, r = 0, trials = 0;
  std::string m;
  std::uint64_t seed = 0;
  bool exact = false;
  std::optional<std::string> out;
};

int cmd_validate_nystrom(const NystromArgs& a) {
  const NystromNoiseReport r =
      validate_nystrom_noise(a.k, a.r, parse_list<std::uint64_t>(a.m, "--m"), a.trials, a.seed, a.exact);
  json rows = json::array();
  for (std::size_t i = 0; i < r.m.size(); ++i) rows.push_back({{"m", r.m[i]}, {"median_error", r.median_error[i]}});
  const bool passed = a.exact ? std::all_of(r.median_error.begin(), r.median_error.end(),
                                            [](double e) { return e <= 1e-9; })
                              : r.passed;
  return emit_report({{"k", r.k},
                      {"r", r.r},
                      {"trials", r.trials},
                      {"seed", a.seed},
                      {"exact", a.exact},
                      {"selected", index_json(r.selected)},
                      {"errors", rows},
                      {"slope", std::isfinite(r.slope) ? json(r.slope) : json(nullptr)},
                      {"passed", passed}},
                     a.out, passed);
}

struct IngestArgs {
  std::string ratings, groups, out;
};

int cmd_ingest(const IngestArgs& a) {
  io::write_model_json(a.out, ingest_ratings(io::read_ratings_csv(a.ratings), io::read_group_labels(a.groups)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive pair recommendation from pairwise loss queries"};
  app.require_subcommand(1);
  int status = 0;
  std::function<int()> action;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic loss matrix (CSV) or population model (JSON)");
  g->add_option("--k", gen.k, "Number of items")->required();
  g->add_option("--r", gen.r, "Rank / number of sub-populations")->required();
  g->add_option("--seed", gen.seed, "Seed")->required();
  g->add_option("--out", gen.out, "Output path")->required();
  g->add_option("--format", gen.format, "matrix or model")->check(CLI::IsMember({"matrix", "model"}));
  g->callback([&] { action = [&] { return cmd_gen(gen); }; });

  PlansArgs pl;
  auto* p = app.add_subcommand("plans", "Exact recovery with a deterministic oracle");
  p->add_option("--matrix", pl.matrix, "Loss matrix CSV or model JSON")->required();
  p->add_option("--r", pl.r, "Stop after this many columns");
  p->add_option("--sigma-thresh", pl.sigma_thresh, "Column acceptance threshold on sigma_min");
  p->add_option("--out", pl.out, "Result JSON")->required();
  p->add_option("--stats", pl.stats, "Oracle call statistics JSON")->required();
  p->callback([&] { action = [&] { return cmd_plans(pl); }; });

  RPlansArgs rp;
  auto* r = app.add_subcommand("rplans", "Recommendation with a stochastic oracle");
  r->add_option("--matrix", rp.matrix, "Loss matrix CSV or model JSON")->required();
  r->add_option("--r", rp.r, "Rank")->required();
  r->add_option("--eps", rp.eps, "Accuracy target");
  r->add_option("--delta", rp.delta, "Failure probability");
  r->add_option("--budget", rp.budget, "Total oracle calls");
  r->add_option("--split", rp.split, "Budget fraction for column selection");
  r->add_option("--seed", rp.seed, "Seed")->required();
  r->add_option("--out", rp.out, "Result JSON")->required();
  r->add_option("--round-cap", rp.round_cap, "Elimination round cap");
  r->add_option("--per-entry-cap", rp.per_entry_cap, "Cap on samples per entry");
  r->callback([&] { action = [&] { return cmd_rplans(rp); }; });

  BaselineArgs bl;
  auto* b = app.add_subcommand("baseline", "Pair-as-arm bandit baselines");
  b->add_option("--algo", bl.algo, "naive, lilucb or se")->required()->check(CLI::IsMember({"naive", "lilucb", "se"}));
  b->add_option("--matrix", bl.matrix, "Loss matrix CSV or model JSON")->required();
  b->add_option("--budget", bl.budget, "Total oracle calls")->required();
  b->add_option("--seed", bl.seed, "Seed")->required();
  b->add_option("--out", bl.out, "Result JSON")->required();
  b->callback([&] { action = [&] { return cmd_baseline(bl); }; });

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Error-versus-budget sweep written as CSV");
  s->add_option("--matrix", sw.matrix, "Loss matrix CSV or model JSON")->required();
  s->add_option("--r", sw.r, "Rank")->required();
  s->add_option("--algos", sw.algos, "Comma-separated algorithms (rplans,naive,lilucb,se)")->required();
  s->add_option("--budgets", sw.budgets, "Comma-separated, strictly increasing budgets")->required();
  s->add_option("--reps", sw.reps, "Repetitions per cell")->required();
  s->add_option("--seed", sw.seed, "Master seed")->required();
  s->add_option("--out", sw.out, "CSV output path")->required();
  s->add_option("--threads", sw.threads, "Worker threads (0 = all cores)");
  s->add_flag("--timing", sw.timing, "Record wall-clock milliseconds (output no longer reproducible)");
  s->callback([&] { action = [&] { return cmd_sweep(sw); }; });

  BernsteinArgs vb;
  auto* v1 = app.add_subcommand("validate-bernstein", "Monte Carlo coverage of the matrix-Bernstein radius");
  v1->add_option("--p", vb.p, "Matrix side")->required();
  v1->add_option("--n", vb.n, "Samples per entry")->required();
  v1->add_option("--delta", vb.delta, "Failure probability")->required();
  v1->add_option("--trials", vb.trials, "Trials")->required();
  v1->add_option("--seed", vb.seed, "Seed")->required();
  v1->add_option("--out", vb.out, "Also write the report here");
  v1->callback([&] { action = [&] { return cmd_validate_bernstein(vb); }; });

  SeArgs vs;
  auto* v2 = app.add_subcommand("validate-se", "Winner rate of elimination on a fixed 5-candidate instance");
  v2->add_option("--delta", vs.delta, "Failure probability")->required();
  v2->add_option("--trials", vs.trials, "Trials")->required();
  v2->add_option("--seed", vs.seed, "Seed")->required();
  v2->add_option("--round-cap", vs.round_cap, "Elimination round cap");
  v2->add_option("--out", vs.out, "Also write the report here");
  v2->callback([&] { action = [&] { return cmd_validate_se(vs); }; });

  NystromArgs vn;
  auto* v3 = app.add_subcommand("validate-nystrom", "Extension error against samples per entry");
  v3->add_option("--k", vn.k, "Items")->required();
  v3->add_option("--r", vn.r, "Rank")->required();
  v3->add_option("--m", vn.m, "Comma-separated samples per entry")->required();
  v3->add_option("--trials", vn.trials, "Trials per m")->required();
  v3->add_option("--seed", vn.seed, "Seed")->required();
  v3->add_flag("--exact", vn.exact, "Use exact entries instead of samples");
  v3->add_option("--out", vn.out, "Also write the report here");
  v3->callback([&] { action = [&] { return cmd_validate_nystrom(vn); }; });

  IngestArgs in;
  auto* i = app.add_subcommand("ingest", "Population model from binary ratings and group labels");
  i->add_option("--ratings", in.ratings, "users x K CSV of 0/1")->required();
  i->add_option("--groups", in.groups, "One group label per user per line")->required();
  i->add_option("--out", in.out, "Model JSON")->required();
  i->callback([&] { action = [&] { return cmd_ingest(in); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgument;
  }

  try {
    status = action();
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitArgument;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return status;
}
