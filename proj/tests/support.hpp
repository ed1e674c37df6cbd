#pragma once

// Reference computations for tests. Nothing here calls into the library's
// numerics: matrices are plain nested vectors and the eigen-solver is a
// cyclic Jacobi sweep written out by hand.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "plans/matrix.hpp"

namespace ref {

using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, std::vector<double>(c, 0.0)); }

inline Mat from(const plans::DenseMatrix& m) {
  Mat out = zeros(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

inline plans::DenseMatrix to_dense(const Mat& m) { return plans::DenseMatrix::from_rows(m); }

inline Mat mul(const Mat& a, const Mat& b) {
  Mat out = zeros(a.size(), b.front().size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b.front().size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

inline Mat transpose(const Mat& a) {
  Mat out = zeros(a.front().size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.front().size(); ++j) out[j][i] = a[i][j];
  }
  return out;
}

inline double max_norm(const Mat& a) {
  double m = 0.0;
  for (const auto& row : a) {
    for (double v : row) m = std::max(m, std::abs(v));
  }
  return m;
}

inline double one_norm(const Mat& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.front().size(); ++j) {
    double s = 0.0;
    for (const auto& row : a) s += std::abs(row[j]);
    best = std::max(best, s);
  }
  return best;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> sym_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Singular values (ascending) as square roots of the eigenvalues of A^T A.
/// Ascending, min(rows, cols) values. Eigenvalues of [0 A; A^T 0] are +-sigma,
/// which keeps small singular values accurate to about eps * ||A||.
inline std::vector<double> singular_values(const Mat& a) {
  const std::size_t m = a.size(), n = a.empty() ? 0 : a[0].size();
  std::vector<double> ev;
  if (a == transpose(a)) {
    ev = sym_eigenvalues(a);
    for (double& v : ev) v = std::abs(v);
  } else {
    Mat big = zeros(m + n, m + n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) big[i][m + j] = big[m + j][i] = a[i][j];
    }
    ev = sym_eigenvalues(big);
    ev.erase(ev.begin(), ev.end() - static_cast<std::ptrdiff_t>(std::min(m, n)));
    for (double& v : ev) v = std::max(0.0, v);
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double sigma_min(const Mat& a) { return singular_values(a).front(); }
inline double two_norm(const Mat& a) { return singular_values(a).back(); }

/// Inverse by Gauss-Jordan elimination with partial pivoting.
inline Mat inverse(Mat a) {
  const std::size_t n = a.size();
  Mat inv = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Random matrix with entries uniform on [lo, hi].
inline Mat random_matrix(std::mt19937_64& g, std::size_t r, std::size_t c, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Mat m = zeros(r, c);
  for (auto& row : m) {
    for (double& v : row) v = u(g);
  }
  return m;
}

/// A A^T for a random K x r factor A with entries in [0, 1], scaled so the
/// largest entry is 1.
inline Mat random_spsd(std::mt19937_64& g, std::size_t k, std::size_t r) {
  const Mat a = random_matrix(g, k, r);
  Mat l = mul(a, transpose(a));
  const double top = max_norm(l);
  for (auto& row : l) {
    for (double& v : row) v /= top;
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) l[i][j] = l[j][i];
  }
  return l;
}

struct Argmin {
  std::size_t i, j;
  double value;
};

/// Exhaustive scan over i <= j, first minimum in lexicographic order.
inline Argmin brute_force_min(const Mat& l) {
  Argmin best{0, 0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (std::size_t j = i; j < l.size(); ++j) {
      if (l[i][j] < best.value) best = {i, j, l[i][j]};
    }
  }
  return best;
}

}  // namespace ref
