#include "plans/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "plans/baselines.hpp"
#include "plans/errors.hpp"
#include "plans/random.hpp"
#include "plans/rplans.hpp"
#include "plans/successive_elimination.hpp"

namespace plans {

namespace {

constexpr int kMaxRedraws = 100;

// A A^T normalized by its largest entry. Each entry is computed once for
// i <= j and mirrored so the result is exactly symmetric.
Eigen::MatrixXd normalized_gram(const Eigen::MatrixXd& a) {
  const Eigen::Index k = a.rows();
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      const double v = a.row(i).dot(a.row(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  const double top = g.maxCoeff();
  if (top > 0.0) g /= top;
  return g;
}

}  // namespace

LossMatrix gen_synthetic(std::size_t k, std::size_t r, std::uint64_t seed) {
  if (r == 0 || r > k) throw ArgumentError("gen_synthetic: need 1 <= r <= K");
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    Eigen::MatrixXd a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.uniform();
    }
    const Eigen::MatrixXd g = normalized_gram(a);
    if (!(g.maxCoeff() == 1.0)) continue;
    DenseMatrix m(g);
    const RankedPair best = optimal_pair(m);
    if (best.i != best.j) return LossMatrix(std::move(m));
  }
  throw DataError("gen_synthetic: no draw with an off-diagonal minimum");
}

PopulationModel gen_population_model(std::size_t k, std::size_t r, std::uint64_t seed) {
  if (r == 0) throw ArgumentError("gen_population_model: r must be positive");
  if (k < 2) throw ArgumentError("gen_population_model: need at least two items");
  RngStream rng(seed);
  // Normalized exponentials are uniform on the simplex.
  std::vector<double> weights(r);
  double total = 0.0;
  for (double& w : weights) {
    w = -std::log(1.0 - rng.uniform());
    total += w;
  }
  if (!(total > 0.0)) {
    std::fill(weights.begin(), weights.end(), 1.0);
    total = static_cast<double>(r);
  }
  for (double& w : weights) w /= total;
  std::vector<std::vector<double>> likes(r, std::vector<double>(k));
  for (auto& u : likes) {
    for (double& x : u) x = rng.uniform();
  }
  return PopulationModel(std::move(weights), std::move(likes));
}

PopulationModel ingest_ratings(const std::vector<std::vector<int>>& ratings, const std::vector<std::string>& labels,
                               const std::optional<std::vector<std::string>>& group_order) {
  if (ratings.empty()) throw ArgumentError("ingest_ratings: no users");
  if (ratings.size() != labels.size()) throw ArgumentError("ingest_ratings: one label per user required");
  const std::size_t k = ratings.front().size();
  for (const auto& row : ratings) {
    if (row.size() != k) throw DataError("ingest_ratings: ragged rating table");
    for (int v : row) {
      if (v != 0 && v != 1) throw DataError("ingest_ratings: ratings must be 0 or 1");
    }
  }

  std::vector<std::string> groups;
  if (group_order) {
    groups = *group_order;
  } else {
    for (const auto& l : labels) {
      if (std::find(groups.begin(), groups.end(), l) == groups.end()) groups.push_back(l);
    }
  }
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (!slot.emplace(groups[g], g).second) throw ArgumentError("ingest_ratings: duplicate group " + groups[g]);
  }

  std::vector<std::size_t> size(groups.size(), 0);
  std::vector<std::vector<double>> likes(groups.size(), std::vector<double>(k, 0.0));
  for (std::size_t u = 0; u < ratings.size(); ++u) {
    const auto it = slot.find(labels[u]);
    if (it == slot.end()) throw ArgumentError("ingest_ratings: unlisted group " + labels[u]);
    ++size[it->second];
    for (std::size_t i = 0; i < k; ++i) likes[it->second][i] += ratings[u][i];
  }
  std::vector<double> weights(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (size[g] == 0) throw ArgumentError("ingest_ratings: group without users: " + groups[g]);
    for (double& x : likes[g]) x /= static_cast<double>(size[g]);
    weights[g] = static_cast<double>(size[g]) / static_cast<double>(ratings.size());
  }
  return PopulationModel(std::move(weights), std::move(likes));
}

IndexSet greedy_sigma_columns(const DenseMatrix& l, std::size_t r) {
  if (!l.square()) throw DimensionError("greedy_sigma_columns: matrix must be square");
  if (r == 0 || r > l.rows()) throw ArgumentError("greedy_sigma_columns: need 1 <= r <= K");
  IndexSet chosen{0};
  while (chosen.size() < r) {
    std::size_t best = 0;
    double best_sigma = -1.0;
    for (std::size_t c = 0; c < l.rows(); ++c) {
      if (chosen.contains(c)) continue;
      const double s = sigma_min(principal_submatrix(l, chosen.with(c)));
      if (s > best_sigma) {
        best_sigma = s;
        best = c;
      }
    }
    chosen = chosen.with(best);
  }
  return chosen;
}

const std::vector<std::string>& sweep_algorithms() {
  static const std::vector<std::string> names{"rplans", "naive", "lilucb", "se"};
  return names;
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& algorithm, std::uint64_t budget, std::size_t rep) {
  return derive_seed(derive_seed(derive_seed(master, label_hash(algorithm)), budget), rep);
}

namespace {

struct Cell {
  std::size_t algo;
  std::size_t budget;
  std::size_t rep;
};

SweepRecord run_cell(const SweepConfig& config, const LossMatrix& loss, double optimum, const Cell& cell) {
  SweepRecord rec;
  rec.algorithm = config.algorithms[cell.algo];
  rec.k = loss.size();
  rec.r = config.r;
  rec.budget = config.budgets[cell.budget];
  rec.rep = cell.rep;
  rec.seed = cell_seed(config.seed, rec.algorithm, rec.budget, rec.rep);

  StochasticOracle oracle(loss, RngStream(rec.seed));
  const auto start = std::chrono::steady_clock::now();
  RankedPair pick;
  if (rec.algorithm == "rplans") {
    RPlansBudgetOptions opt;
    opt.budget = rec.budget;
    pick = run_rplans_budget(oracle, config.r, opt).pair;
  } else if (rec.algorithm == "naive") {
    pick = naive_uniform(oracle, rec.budget).pair;
  } else if (rec.algorithm == "lilucb") {
    pick = lil_ucb(oracle, rec.budget).pair;
  } else {
    PairwiseSeOptions opt;
    opt.query_cap = rec.budget;
    pick = pairwise_se(oracle, opt).pair;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  rec.error = std::max(0.0, loss(pick.i, pick.j) - optimum);
  rec.queries = oracle.stats().total_calls();
  return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  if (config.algorithms.empty()) throw ArgumentError("sweep: no algorithms");
  for (const auto& a : config.algorithms) {
    const auto& known = sweep_algorithms();
    if (std::find(known.begin(), known.end(), a) == known.end()) {
      throw ArgumentError("sweep: unknown algorithm " + a);
    }
  }
  if (config.budgets.empty()) throw ArgumentError("sweep: no budgets");
  for (std::size_t b = 1; b < config.budgets.size(); ++b) {
    if (config.budgets[b] <= config.budgets[b - 1]) throw ArgumentError("sweep: budgets must be strictly increasing");
  }
  if (config.repetitions == 0) throw ArgumentError("sweep: repetitions must be positive");
  const LossMatrix loss(config.loss);
  if (config.r == 0 || config.r > loss.size()) throw ArgumentError("sweep: need 1 <= r <= K");
  const double optimum = optimal_pair(loss).value;

  std::vector<Cell> cells;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (std::size_t b = 0; b < config.budgets.size(); ++b) {
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) cells.push_back({a, b, rep});
    }
  }

  std::vector<SweepRecord> records(cells.size());
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      try {
        records[c] = run_cell(config, loss, optimum, cells[c]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, bool timing) {
  out << "algorithm,K,r,budget,rep,seed,error,queries,wall_ms\n";
  char buf[64];
  for (const auto& rec : records) {
    out << rec.algorithm << ',' << rec.k << ',' << rec.r << ',' << rec.budget << ',' << rec.rep << ',' << rec.seed
        << ',';
    std::snprintf(buf, sizeof buf, "%.17g", rec.error);
    out << buf << ',' << rec.queries << ',';
    std::snprintf(buf, sizeof buf, "%.3f", timing ? rec.wall_ms : 0.0);
    out << buf << '\n';
  }
}

BernsteinReport validate_bernstein(std::size_t p, std::uint64_t n, double delta, std::size_t trials,
                                   std::uint64_t seed) {
  if (p == 0 || n == 0 || trials == 0) throw ArgumentError("validate_bernstein: p, n and trials must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("validate_bernstein: delta must be in (0, 1)");
  const auto pp = static_cast<Eigen::Index>(p);

  RngStream setup(derive_seed(seed, 0));
  Eigen::MatrixXd truth(pp, pp);
  for (Eigen::Index i = 0; i < pp; ++i) {
    for (Eigen::Index j = 0; j < pp; ++j) truth(i, j) = setup.uniform();
  }
  const double truth_sigma = sigma_min(truth);

  BernsteinReport rep;
  rep.p = p;
  rep.n = n;
  rep.delta = delta;
  rep.trials = trials;
  const double pn = static_cast<double>(n);
  rep.radius = bernstein_radius(p, n, static_cast<double>(p * p) / pn, delta);

  RngStream rng(derive_seed(seed, 1));
  Eigen::MatrixXd est(pp, pp);
  for (std::size_t t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < pp; ++i) {
      for (Eigen::Index j = 0; j < pp; ++j) est(i, j) = static_cast<double>(rng.binomial(n, truth(i, j))) / pn;
    }
    const double spectral = norm(Eigen::MatrixXd(est - truth), NormKind::two);
    const double sigma_gap = std::abs(sigma_min(est) - truth_sigma);
    if (spectral > rep.radius) ++rep.spectral_violations;
    if (sigma_gap > rep.radius) ++rep.sigma_violations;
    if (sigma_gap > spectral + 1e-12) ++rep.weyl_violations;
  }
  rep.spectral_fraction = static_cast<double>(rep.spectral_violations) / static_cast<double>(trials);
  rep.sigma_fraction = static_cast<double>(rep.sigma_violations) / static_cast<double>(trials);
  rep.passed = rep.spectral_fraction <= delta && rep.sigma_fraction <= delta && rep.weyl_violations == 0;
  return rep;
}

DenseMatrix se_validation_instance() {
  // (L(0, k), L(1, k), L(k, k)) per candidate k = 2..6; cross-candidate entries are 0.
  const double column[5][3] = {
      {0.3, 0.2, 0.7}, {0.2, 0.4, 0.6}, {0.05, 0.1, 0.9}, {0.5, 0.5, 0.6}, {0.4, 0.3, 0.45},
  };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(7, 7);
  m(0, 0) = 0.9;
  m(1, 1) = 0.9;
  m(0, 1) = m(1, 0) = 0.1;
  for (int c = 0; c < 5; ++c) {
    const int k = c + 2;
    m(0, k) = m(k, 0) = column[c][0];
    m(1, k) = m(k, 1) = column[c][1];
    m(k, k) = column[c][2];
  }
  return DenseMatrix(std::move(m));
}

SeValidationReport validate_se(double delta, std::size_t trials, std::uint64_t seed, std::uint64_t round_cap) {
  if (trials == 0) throw ArgumentError("validate_se: trials must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("validate_se: delta must be in (0, 1)");
  const DenseMatrix table = se_validation_instance();
  const IndexSet base{0, 1};
  const std::vector<std::size_t> candidates{2, 3, 4, 5, 6};

  SeValidationReport rep;
  rep.trials = trials;
  for (std::size_t k : candidates) rep.true_sigma.push_back(sigma_min(principal_submatrix(table, base.with(k))));

  SeOptions opt;
  opt.delta = delta;
  opt.round_cap = round_cap;
  double total_queries = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    StochasticOracle oracle(table, RngStream(derive_seed(seed, t)));
    const SeResult res = run_se(base, candidates, oracle, opt);
    if (res.winner == kSeValidationWinner) ++rep.correct;
    if (res.capped) ++rep.capped;
    total_queries += static_cast<double>(res.queries);
  }
  rep.mean_queries = total_queries / static_cast<double>(trials);
  rep.passed = static_cast<double>(rep.correct) >= (1.0 - delta) * static_cast<double>(trials);
  return rep;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

NystromNoiseReport validate_nystrom_noise(std::size_t k, std::size_t r, const std::vector<std::uint64_t>& m_list,
                                          std::size_t trials, std::uint64_t seed, bool exact) {
  if (m_list.empty() || trials == 0) throw ArgumentError("validate_nystrom_noise: need m values and trials");
  for (std::uint64_t m : m_list) {
    if (m == 0) throw ArgumentError("validate_nystrom_noise: m must be positive");
  }
  const LossMatrix loss = gen_synthetic(k, r, derive_seed(seed, 0));

  NystromNoiseReport rep;
  rep.k = k;
  rep.r = r;
  rep.trials = trials;
  rep.m = m_list;
  rep.selected = greedy_sigma_columns(loss.matrix(), r);
  const DenseMatrix c = column_block(loss.matrix(), rep.selected);
  const DenseMatrix truth = nystrom_extend(c, row_block(c, rep.selected));

  for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
    std::vector<double> errors;
    errors.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      DenseMatrix c_hat = c;
      if (!exact) {
        StochasticOracle oracle(loss, RngStream(derive_seed(derive_seed(seed, 1 + mi), t)));
        c_hat = estimate_factors(oracle, rep.selected, m_list[mi], m_list[mi]).c_hat;
      }
      const DenseMatrix l_hat = nystrom_extend(c_hat, row_block(c_hat, rep.selected));
      errors.push_back(max_abs_diff(l_hat, truth));
    }
    rep.median_error.push_back(median(std::move(errors)));
  }

  // Ordinary least squares on (log m, log median error).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(m_list.size());
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    const double x = std::log(static_cast<double>(m_list[i]));
    const double y = std::log(rep.median_error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  rep.slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : std::numeric_limits<double>::quiet_NaN();
  rep.passed = rep.slope >= -0.7 && rep.slope <= -0.3;
  return rep;
}

}  // namespace plans
