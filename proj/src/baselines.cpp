#include "plans/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "plans/errors.hpp"

namespace plans {

namespace {

// Arm with the smallest empirical loss; unpulled arms count as loss 1 and
// ties go to the smallest arm id.
RankedPair empirical_best(const std::vector<std::uint64_t>& pulls, const std::vector<std::uint64_t>& ones,
                          std::size_t k) {
  std::size_t best = 0;
  double best_loss = 2.0;
  for (std::size_t a = 0; a < pulls.size(); ++a) {
    const double loss = pulls[a] == 0 ? 1.0 : static_cast<double>(ones[a]) / static_cast<double>(pulls[a]);
    if (loss < best_loss) {
      best_loss = loss;
      best = a;
    }
  }
  const ItemPair p = arm_to_pair(best, k);
  return {p.i, p.j, best_loss};
}

}  // namespace

BaselineResult naive_uniform(StochasticOracle& oracle, std::uint64_t budget) {
  if (budget == 0) throw ArgumentError("naive_uniform: budget must be positive");
  const std::size_t k = oracle.size();
  const std::size_t arms = pair_count(k);
  const std::uint64_t start = oracle.stats().total_calls();

  BaselineResult out;
  out.pulls.assign(arms, 0);
  std::vector<std::uint64_t> ones(arms, 0);
  const std::uint64_t each = budget / arms;
  const std::uint64_t leftover = budget % arms;
  for (std::size_t a = 0; a < arms; ++a) {
    const std::uint64_t n = each + (a < leftover ? 1 : 0);
    if (n == 0) continue;
    const ItemPair p = arm_to_pair(a, k);
    ones[a] = oracle.query_many(p.i, p.j, n);
    out.pulls[a] = n;
  }
  out.pair = empirical_best(out.pulls, ones, k);
  out.queries = oracle.stats().total_calls() - start;
  return out;
}

double lil_radius(std::uint64_t n, const LilUcbOptions& options) {
  const double eps = options.epsilon;
  const double omega = options.delta / 5.0;
  const double nn = static_cast<double>(n);
  const double inner = std::max(1.0, std::log((1.0 + eps) * nn));
  return (1.0 + options.beta) * (1.0 + std::sqrt(eps)) *
         std::sqrt(2.0 * (1.0 + eps) * std::log(inner / omega) / nn);
}

BaselineResult lil_ucb(StochasticOracle& oracle, std::uint64_t budget, const LilUcbOptions& options) {
  const std::size_t k = oracle.size();
  const std::size_t arms = pair_count(k);
  if (budget < arms) throw ArgumentError("lil_ucb: budget must allow one pull per arm");
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw ArgumentError("lil_ucb: delta must be in (0, 1)");
  const std::uint64_t start = oracle.stats().total_calls();

  BaselineResult out;
  out.pulls.assign(arms, 0);
  std::vector<std::uint64_t> ones(arms, 0);

  auto ucb = [&](std::size_t a) {
    const double reward = 1.0 - static_cast<double>(ones[a]) / static_cast<double>(out.pulls[a]);
    return reward + lil_radius(out.pulls[a], options);
  };
  // Largest bound first; equal bounds pop the smaller arm id.
  using Entry = std::pair<double, std::size_t>;
  auto lower_priority = [](const Entry& x, const Entry& y) {
    return x.first < y.first || (x.first == y.first && x.second > y.second);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower_priority)> heap(lower_priority);

  for (std::size_t a = 0; a < arms; ++a) {
    const ItemPair p = arm_to_pair(a, k);
    ones[a] += static_cast<std::uint64_t>(oracle.query(p.i, p.j));
    out.pulls[a] = 1;
    heap.emplace(ucb(a), a);
  }
  for (std::uint64_t used = arms; used < budget; ++used) {
    const std::size_t a = heap.top().second;
    heap.pop();
    const ItemPair p = arm_to_pair(a, k);
    ones[a] += static_cast<std::uint64_t>(oracle.query(p.i, p.j));
    ++out.pulls[a];
    heap.emplace(ucb(a), a);
  }

  out.pair = empirical_best(out.pulls, ones, k);
  out.queries = oracle.stats().total_calls() - start;
  return out;
}

double pairwise_se_radius(std::uint64_t t, std::size_t arms, double delta) {
  const double tt = static_cast<double>(t);
  return std::sqrt(std::log(4.0 * static_cast<double>(arms) * tt * tt / delta) / (2.0 * tt));
}

BaselineResult pairwise_se(StochasticOracle& oracle, const PairwiseSeOptions& options) {
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw ArgumentError("pairwise_se: delta must be in (0, 1)");
  if (!(options.eps > 0.0)) throw ArgumentError("pairwise_se: eps must be positive");
  if (options.round_cap == 0) throw ArgumentError("pairwise_se: round_cap must be positive");
  const std::size_t k = oracle.size();
  const std::size_t arms = pair_count(k);
  if (options.query_cap && *options.query_cap < arms) {
    throw ArgumentError("pairwise_se: budget must allow one pull per arm");
  }
  const std::uint64_t start = oracle.stats().total_calls();

  BaselineResult out;
  out.pulls.assign(arms, 0);
  std::vector<std::uint64_t> ones(arms, 0);
  std::vector<std::size_t> active(arms);
  for (std::size_t a = 0; a < arms; ++a) active[a] = a;

  auto pull_active = [&] {
    for (std::size_t a : active) {
      const ItemPair p = arm_to_pair(a, k);
      ones[a] += static_cast<std::uint64_t>(oracle.query(p.i, p.j));
      ++out.pulls[a];
    }
  };

  pull_active();
  for (std::uint64_t t = 1; active.size() > 1; ++t) {
    const double rad = pairwise_se_radius(t, arms, options.delta);
    double lead = -1.0;
    for (std::size_t a : active) lead = std::max(lead, 1.0 - static_cast<double>(ones[a]) / static_cast<double>(t));
    std::vector<std::size_t> keep;
    for (std::size_t a : active) {
      const double reward = 1.0 - static_cast<double>(ones[a]) / static_cast<double>(t);
      if (reward + rad >= lead - rad) keep.push_back(a);
    }
    active = std::move(keep);
    if (active.size() == 1 || rad <= options.eps / 2.0 || t >= options.round_cap) break;
    if (options.query_cap && oracle.stats().total_calls() - start + active.size() > *options.query_cap) break;
    pull_active();
  }

  // Empirical leader among the survivors; active stays in ascending arm order.
  std::size_t best = active.front();
  for (std::size_t a : active) {
    if (ones[a] * out.pulls[best] < ones[best] * out.pulls[a]) best = a;
  }
  const ItemPair p = arm_to_pair(best, k);
  out.pair = {p.i, p.j, static_cast<double>(ones[best]) / static_cast<double>(out.pulls[best])};
  out.queries = oracle.stats().total_calls() - start;
  return out;
}

}  // namespace plans
