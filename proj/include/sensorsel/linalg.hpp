#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sensorsel/matrix.hpp"

namespace sensorsel::linalg {

// Squared norms below kDegenerateRelTol * (largest squared row norm at initialization)
// are treated as zero by deflation, pivoting and the greedy selectors.
inline constexpr double kDegenerateRelTol = 1e-13;

double row_norm_sq(const Matrix& m, std::size_t i);
double max_row_norm_sq(const Matrix& m);
inline double degenerate_threshold(const Matrix& m) { return kDegenerateRelTol * max_row_norm_sq(m); }

// Returns m - m v^T v / |v|^2. The cutoff is taken relative to m itself.
Matrix deflate(const Matrix& m, std::span<const double> v);

// In-place variant used by the greedy loops, where the cutoff is fixed once for
// the whole run. v must not alias storage of m.
void deflate_in_place(Matrix& m, std::span<const double> v, double threshold);

struct SvdResult {
  Matrix left;             // rows x k, orthonormal columns
  Vector singular_values;  // k, non-increasing
  Matrix right;            // cols x k, orthonormal columns; m ~= left * diag(sv) * right^T
  std::size_t sweeps = 0;
};

struct SvdOptions {
  std::size_t max_sweeps = 80;
};

// One-sided (Hestenes) Jacobi on whichever orientation has fewer columns.
SvdResult thin_svd(const Matrix& m, std::size_t k, SvdOptions options = {});

// ln|det m| from partial-pivot LU. Throws SingularMatrixError naming the failing pivot.
double log_abs_det(const Matrix& m);

struct LeastSquaresSolution {
  Vector x;
  std::size_t rank = 0;
  bool rank_deficient = false;
};

struct LeastSquaresBatch {
  Matrix x;  // a.cols x b.cols
  std::size_t rank = 0;
  bool rank_deficient = false;
};

// Minimum-norm least squares through the SVD pseudo-inverse.
LeastSquaresSolution solve_least_squares(const Matrix& a, std::span<const double> b);
// Column-wise solve sharing one factorization.
LeastSquaresBatch solve_least_squares(const Matrix& a, const Matrix& b);

// Small dense helpers.
Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
// a^T * b without forming the transpose.
Matrix multiply_at_b(const Matrix& a, const Matrix& b);
// a * a^T
Matrix gram_rows(const Matrix& a);
Vector multiply(const Matrix& a, std::span<const double> x);
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows);
Matrix stack_rows(std::span<const Matrix> blocks);
double frobenius_norm(const Matrix& m);
double norm2(std::span<const double> v);

}  // namespace sensorsel::linalg
