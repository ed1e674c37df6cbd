#pragma once

// Dense matrix primitives shared by every algorithm in the library: validated
// storage, principal submatrices, singular values, the max / induced-1 /
// spectral norms and the Nystrom extension C pinv(W) C^T.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace plans {

/// Real matrix with finite entries. Immutable once constructed.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of an Eigen matrix; throws DimensionError on non-finite entries.
  explicit DenseMatrix(Eigen::MatrixXd values);

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  bool square() const { return values_.rows() == values_.cols(); }
  bool empty() const { return values_.size() == 0; }

  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  const Eigen::MatrixXd& values() const { return values_; }

  DenseMatrix transpose() const { return DenseMatrix(Eigen::MatrixXd(values_.transpose())); }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

/// Strictly increasing list of zero-based indices.
class IndexSet {
 public:
  IndexSet() = default;
  /// Throws ArgumentError unless `indices` is strictly increasing.
  explicit IndexSet(std::vector<std::size_t> indices);
  IndexSet(std::initializer_list<std::size_t> indices)
      : IndexSet(std::vector<std::size_t>(indices)) {}

  /// Every index from 0 to n - 1.
  static IndexSet all(std::size_t n);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t i) const;
  std::size_t operator[](std::size_t k) const { return indices_[k]; }
  std::span<const std::size_t> indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Copy with `i` added in sorted position; no-op when already present.
  IndexSet with(std::size_t i) const;

  /// Throws DimensionError if any index is >= bound.
  void check_bound(std::size_t bound) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

enum class NormKind { max, one, two };

/// Singular values in decreasing order (full decomposition).
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

/// Smallest singular value of a square matrix.
double sigma_min(const DenseMatrix& m);
double sigma_min(const Eigen::MatrixXd& m);

DenseMatrix principal_submatrix(const DenseMatrix& m, const IndexSet& s);

/// The K x |s| block of columns of `m` listed in `s`.
DenseMatrix column_block(const DenseMatrix& m, const IndexSet& s);

/// The |s| x cols block of rows of `m` listed in `s`.
DenseMatrix row_block(const DenseMatrix& m, const IndexSet& s);

/// Moore-Penrose inverse; singular values below tol * sigma_max are treated as zero.
DenseMatrix pseudo_inverse(const DenseMatrix& m, double tol = 1e-12);

/// Exact inverse; throws SingularityError when sigma_min(m) == 0.
DenseMatrix inverse(const DenseMatrix& m);

/// c * pinv(w) * c^T, symmetrized as (X + X^T) / 2.
DenseMatrix nystrom_extend(const DenseMatrix& c, const DenseMatrix& w, double tol = 1e-12);

double norm(const DenseMatrix& m, NormKind kind);
double norm(const Eigen::MatrixXd& m, NormKind kind);

/// Problem-dependent constants that scale the per-entry sample counts of the
/// noisy Nystrom estimator.
struct NystromConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// C1(W, C) and C2(W, C); throws SingularityError when w is singular.
NystromConstants c1_c2_constants(const DenseMatrix& w, const DenseMatrix& c);

/// Largest |a(i,j) - b(i,j)|.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

bool is_symmetric(const DenseMatrix& m, double tol);

}  // namespace plans
