#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace pottsmc {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a * b with Kahan-compensated accumulation of every output entry. Zero
/// entries of a are skipped, which makes the transfer-matrix products cheap.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  std::vector<double> comp(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(comp.begin(), comp.end(), 0.0);
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < brow.size(); ++j) {
        const double bkj = brow[j];
        if (bkj == 0.0) continue;
        const double y = aik * bkj - comp[j];
        const double t = out[j] + y;
        comp[j] = (t - out[j]) - y;
        out[j] = t;
      }
    }
  }
  return c;
}

/// Row vector times matrix.
inline std::vector<double> left_multiply(std::span<const double> x, const Matrix& m) {
  if (x.size() != m.rows()) throw std::invalid_argument("left_multiply: dimension mismatch");
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i] == 0.0) continue;
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += x[i] * r[j];
  }
  return out;
}

inline double kahan_sum(std::span<const double> xs) {
  double s = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

struct EigenDecomposition {
  /// Sorted descending.
  std::vector<double> values;
  /// Column j of vectors is the unit eigenvector for values[j]; empty unless
  /// requested.
  Matrix vectors;
  int sweeps = 0;
};

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm is at most tol_per_dim * n;
/// throws ConvergenceError after max_sweeps.
inline EigenDecomposition symmetric_eigen(Matrix a, bool want_vectors = false,
                                          double tol_per_dim = 1e-12, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("symmetric_eigen: matrix is not square");
  Matrix v = want_vectors ? Matrix::identity(n) : Matrix();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const double tol = tol_per_dim * static_cast<double>(std::max<std::size_t>(n, 1));
  int sweep = 0;
  while (off_norm() > tol) {
    if (sweep++ >= max_sweeps)
      throw ConvergenceError("symmetric_eigen: Jacobi did not converge in " +
                             std::to_string(max_sweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Negligible against both diagonal entries: drop it.
        if (sweep > 4 && std::abs(app) + 100.0 * std::abs(apq) == std::abs(app) &&
            std::abs(aqq) + 100.0 * std::abs(apq) == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // Rotation angle zeroing a(p, q); t = tan(theta), smaller root.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        double* rp = &a(p, 0);
        double* rq = &a(q, 0);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = rp[k];
          const double akq = rq[k];
          rp[k] = c * akp - s * akq;
          rq[k] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          a(k, p) = rp[k];
          a(k, q) = rq[k];
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;

        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]);
  if (want_vectors) {
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

}  // namespace pottsmc
