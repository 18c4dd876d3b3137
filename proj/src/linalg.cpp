#include "sensorsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sensorsel/simd/kernels.hpp"

namespace sensorsel::linalg {

double row_norm_sq(const Matrix& m, std::size_t i) {
  if (i >= m.rows()) {
    throw ArgumentError("row index " + std::to_string(i) + " out of range for " +
                        std::to_string(m.rows()) + " rows");
  }
  return simd::sum_sq(m.row(i));
}

double max_row_norm_sq(const Matrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) best = std::max(best, simd::sum_sq(m.row(i)));
  return best;
}

void deflate_in_place(Matrix& m, std::span<const double> v, double threshold) {
  if (v.size() != m.cols()) {
    throw ArgumentError("deflation vector length " + std::to_string(v.size()) +
                        " does not match " + std::to_string(m.cols()) + " columns");
  }
  const double vv = simd::sum_sq(v);
  if (!(vv > threshold) || vv == 0.0) {
    throw DegenerateDirectionError("deflation direction is degenerate (|v|^2 = " +
                                   std::to_string(vv) + ")");
  }
  const double inv = 1.0 / vv;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    const double coef = simd::dot(row, v) * inv;
    if (coef != 0.0) simd::axpy(-coef, v, row);
  }
}

Matrix deflate(const Matrix& m, std::span<const double> v) {
  Matrix out = m;
  const Vector copy(v.begin(), v.end());
  deflate_in_place(out, copy, degenerate_threshold(m));
  return out;
}

namespace {

// Columns of the working matrix are held as rows of `cols` so that every
// rotation touches two contiguous arrays.
struct JacobiState {
  std::vector<Vector> cols;   // k0 vectors of length len
  std::vector<Vector> right;  // k0 vectors of length k0
  std::size_t sweeps = 0;
};

JacobiState hestenes(std::vector<Vector> cols, std::size_t max_sweeps) {
  const std::size_t k0 = cols.size();
  const std::size_t len = cols.empty() ? 0 : cols.front().size();
  JacobiState st;
  st.right.assign(k0, Vector(k0, 0.0));
  for (std::size_t j = 0; j < k0; ++j) st.right[j][j] = 1.0;

  const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                     std::sqrt(static_cast<double>(std::max<std::size_t>(len, 1)));
  std::vector<double> norms(k0);
  for (std::size_t j = 0; j < k0; ++j) norms[j] = simd::sum_sq(cols[j]);

  bool rotated = true;
  while (rotated) {
    if (st.sweeps == max_sweeps) {
      throw NumericalError("Jacobi SVD did not converge after " + std::to_string(max_sweeps) +
                               " sweeps",
                           st.sweeps);
    }
    rotated = false;
    ++st.sweeps;
    for (std::size_t p = 0; p + 1 < k0; ++p) {
      for (std::size_t q = p + 1; q < k0; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = simd::dot(cols[p], cols[q]);
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        simd::rotate(c, s, cols[p], cols[q]);
        simd::rotate(c, s, st.right[p], st.right[q]);
        norms[p] = simd::sum_sq(cols[p]);
        norms[q] = simd::sum_sq(cols[q]);
      }
    }
  }
  st.cols = std::move(cols);
  return st;
}

// Gram-Schmidt (two passes) of unit coordinate vectors against `basis` until a
// new unit vector is found.
Vector complete_basis(const std::vector<Vector>& basis, std::size_t len) {
  for (std::size_t e = 0; e < len; ++e) {
    Vector w(len, 0.0);
    w[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) simd::axpy(-simd::dot(b, w), b, w);
    }
    const double nn = std::sqrt(simd::sum_sq(w));
    if (nn > 0.5) {
      for (double& x : w) x /= nn;
      return w;
    }
  }
  throw NumericalError("could not complete orthonormal basis");
}

}  // namespace

SvdResult thin_svd(const Matrix& m, std::size_t k, SvdOptions options) {
  const std::size_t kmax = std::min(m.rows(), m.cols());
  if (k < 1 || k > kmax) {
    throw ArgumentError("SVD rank " + std::to_string(k) + " outside [1, " + std::to_string(kmax) +
                        "]");
  }
  const bool tall = m.rows() >= m.cols();
  const std::size_t len = tall ? m.rows() : m.cols();
  const std::size_t k0 = tall ? m.cols() : m.rows();

  std::vector<Vector> cols(k0, Vector(len));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (tall) {
        cols[j][i] = m(i, j);
      } else {
        cols[i][j] = m(i, j);
      }
    }
  }

  JacobiState st = hestenes(std::move(cols), options.max_sweeps);

  std::vector<double> sigma(k0);
  for (std::size_t j = 0; j < k0; ++j) sigma[j] = std::sqrt(simd::sum_sq(st.cols[j]));
  std::vector<std::size_t> order(k0);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  const double sigma_max = sigma[order.front()];
  const double cutoff = sigma_max * std::numeric_limits<double>::epsilon();

  std::vector<Vector> u;
  u.reserve(k);
  SvdResult out;
  out.singular_values.resize(k);
  out.sweeps = st.sweeps;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t j = order[c];
    out.singular_values[c] = sigma[j];
    if (sigma[j] > cutoff && sigma[j] > 0.0) {
      Vector w = st.cols[j];
      for (double& x : w) x /= sigma[j];
      u.push_back(std::move(w));
    } else {
      u.push_back(complete_basis(u, len));
    }
  }

  Matrix left_long(len, k);
  Matrix left_short(k0, k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < len; ++i) left_long(i, c) = u[c][i];
    const Vector& r = st.right[order[c]];
    for (std::size_t i = 0; i < k0; ++i) left_short(i, c) = r[i];
  }
  if (tall) {
    out.left = std::move(left_long);
    out.right = std::move(left_short);
  } else {
    out.left = std::move(left_short);
    out.right = std::move(left_long);
  }
  return out;
}

double log_abs_det(const Matrix& m) {
  if (!m.is_square()) {
    throw ArgumentError("determinant of non-square " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + " matrix");
  }
  const std::size_t n = m.rows();
  const double threshold = degenerate_threshold(m);
  Matrix lu = m;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        piv = i;
      }
    }
    if (!(best * best > threshold) || best == 0.0) {
      throw SingularMatrixError("matrix is singular at pivot " + std::to_string(k), k);
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
    }
    const double d = lu(k, k);
    acc += std::log(std::abs(d));
    const auto pivot_tail = lu.row(k).subspan(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / d;
      if (f != 0.0) simd::axpy(-f, pivot_tail, lu.row(i).subspan(k + 1));
    }
  }
  return acc;
}

LeastSquaresBatch solve_least_squares(const Matrix& a, const Matrix& b) {
  if (b.rows() != a.rows()) {
    throw ArgumentError("right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
                        std::to_string(a.rows()));
  }
  const std::size_t k = std::min(a.rows(), a.cols());
  const SvdResult svd = thin_svd(a, k);
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * svd.singular_values.front();
  std::size_t rank = 0;
  while (rank < k && svd.singular_values[rank] > tol) ++rank;

  LeastSquaresBatch out{Matrix(a.cols(), b.cols()), rank, rank < k};
  // x = V_r diag(1/s) U_r^T b
  const Matrix utb = multiply_at_b(svd.left, b);
  for (std::size_t c = 0; c < rank; ++c) {
    const double inv = 1.0 / svd.singular_values[c];
    for (std::size_t j = 0; j < b.cols(); ++j) {
      const double coef = utb(c, j) * inv;
      for (std::size_t i = 0; i < a.cols(); ++i) out.x(i, j) += svd.right(i, c) * coef;
    }
  }
  return out;
}

LeastSquaresSolution solve_least_squares(const Matrix& a, std::span<const double> b) {
  if (b.size() != a.rows()) {
    throw ArgumentError("right-hand side has length " + std::to_string(b.size()) + ", expected " +
                        std::to_string(a.rows()));
  }
  const Matrix rhs(b.size(), 1, Vector(b.begin(), b.end()));
  LeastSquaresBatch batch = solve_least_squares(a, rhs);
  LeastSquaresSolution out;
  out.x.assign(batch.x.data().begin(), batch.x.data().end());
  out.rank = batch.rank;
  out.rank_deficient = batch.rank_deficient;
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  }
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ArgumentError("cannot multiply " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) simd::axpy(aik, b.row(k), out);
    }
  }
  return c;
}

Matrix multiply_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ArgumentError("cannot form a^T b with " + std::to_string(a.rows()) + " vs " +
                        std::to_string(b.rows()) + " rows");
  }
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki != 0.0) simd::axpy(aki, b.row(k), c.row(i));
    }
  }
  return c;
}

Matrix gram_rows(const Matrix& a) {
  Matrix g(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = simd::dot(a.row(i), a.row(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw ArgumentError("vector length " + std::to_string(x.size()) + " does not match " +
                        std::to_string(a.cols()) + " columns");
  }
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = simd::dot(a.row(i), x);
  return y;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
  if (rows.empty()) throw ArgumentError("cannot gather zero rows");
  Matrix out(rows.size(), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= m.rows()) {
      throw ArgumentError("row index " + std::to_string(rows[k]) + " out of range for " +
                          std::to_string(m.rows()) + " rows");
    }
    std::copy(m.row(rows[k]).begin(), m.row(rows[k]).end(), out.row(k).begin());
  }
  return out;
}

Matrix stack_rows(std::span<const Matrix> blocks) {
  if (blocks.empty()) throw ArgumentError("cannot stack zero blocks");
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != blocks.front().cols()) throw ArgumentError("stacked blocks differ in width");
    rows += b.rows();
  }
  Matrix out(rows, blocks.front().cols());
  auto dst = out.data().begin();
  for (const auto& b : blocks) dst = std::copy(b.data().begin(), b.data().end(), dst);
  return out;
}

double frobenius_norm(const Matrix& m) { return std::sqrt(simd::sum_sq(m.data())); }

double norm2(std::span<const double> v) { return std::sqrt(simd::sum_sq(v)); }

}  // namespace sensorsel::linalg
