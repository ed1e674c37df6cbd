#include "plans/reward_model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "plans/errors.hpp"

namespace plans {

PopulationModel::PopulationModel(std::vector<double> weights,
                                 std::vector<std::vector<double>> like_probabilities)
    : weights_(std::move(weights)), likes_(std::move(like_probabilities)) {
  if (weights_.empty()) throw DataError("model: need at least one component");
  if (weights_.size() != likes_.size()) {
    throw DataError("model: p has " + std::to_string(weights_.size()) + " entries but u has " +
                    std::to_string(likes_.size()) + " vectors");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw DataError("model: mixture weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "model: mixture weights sum to " << total << ", expected 1";
    throw DataError(os.str());
  }
  const std::size_t k = likes_.front().size();
  if (k < 2) throw DataError("model: need at least two items");
  for (const auto& u : likes_) {
    if (u.size() != k) throw DataError("model: like-probability vectors differ in length");
    for (double x : u) {
      if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw DataError("model: like probabilities must lie in [0, 1]");
      }
    }
  }
}

LossMatrix::LossMatrix(DenseMatrix m) : m_(std::move(m)) {
  if (!m_.square() || m_.empty()) throw DataError("loss matrix: must be square and non-empty");
  if (!is_symmetric(m_, 1e-12)) throw DataError("loss matrix: not symmetric");
  if (m_.values().minCoeff() < 0.0 || m_.values().maxCoeff() > 1.0) {
    throw DataError("loss matrix: entries must lie in [0, 1]");
  }
  const Eigen::MatrixXd sym = 0.5 * (m_.values() + m_.values().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw DataError("loss matrix: not positive semi-definite");
  }
}

LossMatrix build_loss_matrix(const PopulationModel& model) {
  const auto k = static_cast<Eigen::Index>(model.items());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t c = 0; c < model.components(); ++c) {
    Eigen::VectorXd v(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      v(i) = 1.0 - model.like_probabilities()[c][static_cast<std::size_t>(i)];
    }
    l.noalias() += model.weights()[c] * v * v.transpose();
  }
  // Rounding in the outer products can push entries a hair outside [0, 1]
  // or break exact symmetry.
  Eigen::MatrixXd sym = (0.5 * (l + l.transpose())).cwiseMax(0.0).cwiseMin(1.0);
  return LossMatrix(DenseMatrix(std::move(sym)));
}

DenseMatrix build_reward_matrix(const LossMatrix& l) {
  const auto& v = l.matrix().values();
  return DenseMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Ones(v.rows(), v.cols()) - v));
}

RankedPair optimal_pair(const DenseMatrix& m) {
  if (!m.square() || m.empty()) throw DimensionError("optimal_pair: need a non-empty square matrix");
  RankedPair best{0, 0, m(0, 0)};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      if (m(i, j) < best.value) best = {i, j, m(i, j)};
    }
  }
  return best;
}

int simulate_round(const PopulationModel& model, std::size_t i, std::size_t j, RngStream& rng) {
  if (i >= model.items() || j >= model.items()) throw DimensionError("simulate_round: bad item index");
  const std::size_t z = rng.categorical(model.weights());
  const auto& u = model.like_probabilities()[z];
  const bool yi = rng.bernoulli(u[i]);
  const bool yj = rng.bernoulli(u[j]);
  return (yi || yj) ? 1 : 0;
}

DeterministicOracle::DeterministicOracle(DenseMatrix l) : l_(std::move(l)), stats_(l_.rows()) {
  if (!l_.square() || l_.empty()) throw DimensionError("oracle: matrix must be square and non-empty");
  if (!is_symmetric(l_, 1e-12)) throw DataError("oracle: matrix must be symmetric");
}

double DeterministicOracle::query(std::size_t i, std::size_t j) {
  if (i >= size() || j >= size()) throw DimensionError("oracle: index out of range");
  stats_.record(i, j);
  return l_(i, j);
}

StochasticOracle::StochasticOracle(DenseMatrix l, RngStream rng)
    : l_(std::move(l)), rng_(std::move(rng)), stats_(l_.rows()) {
  if (!l_.square() || l_.empty()) throw DimensionError("oracle: matrix must be square and non-empty");
  if (!is_symmetric(l_, 1e-12)) throw DataError("oracle: matrix must be symmetric");
  if (l_.values().minCoeff() < 0.0 || l_.values().maxCoeff() > 1.0) {
    throw DataError("oracle: entries must be probabilities");
  }
}

void StochasticOracle::check(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw DimensionError("oracle: index out of range");
}

int StochasticOracle::query(std::size_t i, std::size_t j) {
  check(i, j);
  stats_.record(i, j);
  return rng_.bernoulli(l_(i, j)) ? 1 : 0;
}

std::uint64_t StochasticOracle::query_many(std::size_t i, std::size_t j, std::uint64_t n) {
  check(i, j);
  stats_.record(i, j, n);
  return rng_.binomial(n, l_(i, j));
}

}  // namespace plans
