#include "plans/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "plans/errors.hpp"

namespace plans {

namespace {

Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : values_(Eigen::MatrixXd::Zero(as_index(rows), as_index(cols))) {}

DenseMatrix::DenseMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) {
    throw DimensionError("DenseMatrix: entries must be finite");
  }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  copy.reserve(rows.size());
  for (const auto& row : rows) copy.emplace_back(row);
  return from_rows(copy);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return DenseMatrix();
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(as_index(rows.size()), as_index(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DimensionError("DenseMatrix: ragged rows (row " + std::to_string(i) + ")");
    }
    for (std::size_t j = 0; j < cols; ++j) m(as_index(i), as_index(j)) = rows[i][j];
  }
  return DenseMatrix(std::move(m));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  return DenseMatrix(Eigen::MatrixXd::Identity(as_index(n), as_index(n)));
}

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k] <= indices_[k - 1]) {
      throw ArgumentError("IndexSet: indices must be strictly increasing");
    }
  }
}

IndexSet IndexSet::all(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return IndexSet(std::move(v));
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

IndexSet IndexSet::with(std::size_t i) const {
  if (contains(i)) return *this;
  std::vector<std::size_t> v = indices_;
  v.insert(std::upper_bound(v.begin(), v.end(), i), i);
  return IndexSet(std::move(v));
}

void IndexSet::check_bound(std::size_t bound) const {
  if (!indices_.empty() && indices_.back() >= bound) {
    std::ostringstream os;
    os << "IndexSet: index " << indices_.back() << " out of range for size " << bound;
    throw DimensionError(os.str());
  }
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  // BDCSVD falls back to one-sided Jacobi below its block size, so small
  // matrices get the accurate path automatically.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

double sigma_min(const Eigen::MatrixXd& m) {
  require_square(m, "sigma_min");
  if (m.size() == 0) return 0.0;
  const Eigen::VectorXd s = singular_values(m);
  return s(s.size() - 1);
}

double sigma_min(const DenseMatrix& m) { return sigma_min(m.values()); }

DenseMatrix principal_submatrix(const DenseMatrix& m, const IndexSet& s) {
  require_square(m.values(), "principal_submatrix");
  s.check_bound(m.rows());
  const auto n = as_index(s.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      out(a, b) = m(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]);
    }
  }
  return DenseMatrix(std::move(out));
}

DenseMatrix column_block(const DenseMatrix& m, const IndexSet& s) {
  s.check_bound(m.cols());
  Eigen::MatrixXd out(m.values().rows(), as_index(s.size()));
  for (std::size_t b = 0; b < s.size(); ++b) out.col(as_index(b)) = m.values().col(as_index(s[b]));
  return DenseMatrix(std::move(out));
}

DenseMatrix row_block(const DenseMatrix& m, const IndexSet& s) {
  s.check_bound(m.rows());
  Eigen::MatrixXd out(as_index(s.size()), m.values().cols());
  for (std::size_t a = 0; a < s.size(); ++a) out.row(as_index(a)) = m.values().row(as_index(s[a]));
  return DenseMatrix(std::move(out));
}

DenseMatrix pseudo_inverse(const DenseMatrix& m, double tol) {
  if (m.empty()) return DenseMatrix(m.cols(), m.rows());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m.values(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = tol * s(0);
  Eigen::VectorXd inv_s = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cutoff && s(k) > 0.0) inv_s(k) = 1.0 / s(k);
  }
  return DenseMatrix(Eigen::MatrixXd(svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().transpose()));
}

DenseMatrix inverse(const DenseMatrix& m) {
  require_square(m.values(), "inverse");
  if (m.empty() || sigma_min(m) == 0.0) throw SingularityError("inverse: matrix is singular");
  Eigen::MatrixXd inv = m.values().fullPivLu().inverse();
  if (!inv.allFinite()) throw SingularityError("inverse: matrix is numerically singular");
  return DenseMatrix(std::move(inv));
}

DenseMatrix nystrom_extend(const DenseMatrix& c, const DenseMatrix& w, double tol) {
  require_square(w.values(), "nystrom_extend");
  if (w.rows() != c.cols()) {
    std::ostringstream os;
    os << "nystrom_extend: W is " << w.rows() << "x" << w.cols() << " but C has " << c.cols()
       << " columns";
    throw DimensionError(os.str());
  }
  if (w.empty()) return DenseMatrix(c.rows(), c.rows());
  // Full rank at tol: solve rather than form W^-1, which loses a factor of cond(W).
  const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(w.values()).singularValues();
  Eigen::MatrixXd x;
  if (s(s.size() - 1) > tol * s(0) && s(s.size() - 1) > 0.0) {
    x = c.values() * w.values().colPivHouseholderQr().solve(c.values().transpose());
  } else {
    x = c.values() * pseudo_inverse(w, tol).values() * c.values().transpose();
  }
  return DenseMatrix(Eigen::MatrixXd(0.5 * (x + x.transpose())));
}

double norm(const Eigen::MatrixXd& m, NormKind kind) {
  if (m.size() == 0) return 0.0;
  switch (kind) {
    case NormKind::max:
      return m.cwiseAbs().maxCoeff();
    case NormKind::one:
      return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::two:
      return singular_values(m)(0);
  }
  return 0.0;
}

double norm(const DenseMatrix& m, NormKind kind) { return norm(m.values(), kind); }

NystromConstants c1_c2_constants(const DenseMatrix& w, const DenseMatrix& c) {
  require_square(w.values(), "c1_c2_constants");
  if (c.cols() != w.rows()) throw DimensionError("c1_c2_constants: C and W do not conform");
  const Eigen::MatrixXd w_inv = inverse(w).values();

  const double winv_ct_max = norm(Eigen::MatrixXd(w_inv * c.values().transpose()), NormKind::max);
  const double winv_max = norm(w_inv, NormKind::max);
  const double winv_two = norm(w_inv, NormKind::two);
  const double c_winv_one = norm(Eigen::MatrixXd(c.values() * w_inv), NormKind::one);

  NystromConstants k;
  k.c1 = std::max({winv_ct_max, winv_ct_max * winv_ct_max, winv_max, c_winv_one * c_winv_one,
                   winv_two * winv_max});
  k.c2 = std::max({winv_two * winv_two * winv_max * winv_max, winv_two * winv_max, winv_two,
                   winv_two * winv_two});
  return k;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shapes differ");
  }
  return norm(Eigen::MatrixXd(a.values() - b.values()), NormKind::max);
}

bool is_symmetric(const DenseMatrix& m, double tol) {
  if (!m.square()) return false;
  return m.empty() || (m.values() - m.values().transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace plans
