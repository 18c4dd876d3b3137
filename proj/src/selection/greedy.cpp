#include <algorithm>
#include <string>
#include <vector>

#include "sensorsel/linalg.hpp"
#include "sensorsel/selection.hpp"
#include "sensorsel/simd/kernels.hpp"

namespace sensorsel::selection {
namespace {

// Same arithmetic as linalg::deflate_in_place applied to a single row, so that
// gains computed on scratch copies match the persistent working matrix exactly.
inline void project_out(std::span<double> row, std::span<const double> v, double inv) {
  const double coef = simd::dot(row, v) * inv;
  if (coef != 0.0) simd::axpy(-coef, v, row);
}

}  // namespace

SensorSelection select_scalar_greedy(const Matrix& candidate, std::size_t p) {
  if (p < 1 || p > candidate.cols()) {
    throw ArgumentError("scalar greedy needs 1 <= p <= r, got p=" + std::to_string(p) +
                        ", r=" + std::to_string(candidate.cols()));
  }
  if (p > candidate.rows()) {
    throw ArgumentError("cannot select " + std::to_string(p) + " sensors from " +
                        std::to_string(candidate.rows()) + " candidates");
  }
  Matrix work = candidate;
  const double threshold = linalg::degenerate_threshold(work);
  std::vector<bool> taken(work.rows(), false);
  std::vector<std::size_t> picks;
  std::vector<double> gains;
  Vector pivot(work.cols());

  for (std::size_t step = 0; step < p; ++step) {
    std::size_t best = work.rows();
    double best_norm = threshold;
    for (std::size_t i = 0; i < work.rows(); ++i) {
      if (taken[i]) continue;
      const double nn = simd::sum_sq(work.row(i));
      if (nn > best_norm) {
        best_norm = nn;
        best = i;
      }
    }
    if (best == work.rows() || best_norm == 0.0) {
      throw ExhaustionError("scalar greedy exhausted non-degenerate rows at step " +
                                std::to_string(step + 1) + " of " + std::to_string(p),
                            step);
    }
    taken[best] = true;
    picks.push_back(best);
    gains.push_back(best_norm);
    std::copy(work.row(best).begin(), work.row(best).end(), pivot.begin());
    linalg::deflate_in_place(work, pivot, threshold);
  }

  SensorSelection sel(std::move(picks), 1, candidate.rows(), Method::ScalarGreedy);
  sel.gains = std::move(gains);
  return sel;
}

double location_gain(const Matrix& working, std::size_t location, std::size_t location_count,
                     std::size_t components, double threshold) {
  const std::size_t r = working.cols();
  std::vector<double> scratch(components * r);
  for (std::size_t j = 0; j < components; ++j) {
    const auto src = working.row(location + location_count * j);
    std::copy(src.begin(), src.end(), scratch.begin() + static_cast<std::ptrdiff_t>(j * r));
  }
  const std::span<double> rows(scratch);
  double gain = 1.0;
  for (std::size_t j = 0; j < components; ++j) {
    const auto v = rows.subspan(j * r, r);
    const double nn = simd::sum_sq(v);
    if (!(nn > threshold) || nn == 0.0) return 0.0;
    gain *= nn;
    const double inv = 1.0 / nn;
    for (std::size_t k = j + 1; k < components; ++k) project_out(rows.subspan(k * r, r), v, inv);
  }
  return gain;
}

SensorSelection select_vector_greedy(const pod::PodBasis& basis, std::size_t p) {
  const std::size_t s = basis.components;
  const std::size_t r = basis.rank();
  const std::size_t count = basis.locations();
  if (p < 1 || s * p > r) {
    throw ArgumentError("vector greedy needs 1 <= p and s*p <= r, got s=" + std::to_string(s) +
                        ", p=" + std::to_string(p) + ", r=" + std::to_string(r));
  }
  if (p > count) {
    throw ArgumentError("cannot select " + std::to_string(p) + " sensors from " +
                        std::to_string(count) + " locations");
  }
  Matrix work = basis.modes;
  const double threshold = linalg::degenerate_threshold(work);
  std::vector<bool> taken(count, false);
  std::vector<std::size_t> picks;
  std::vector<double> gains;
  Vector pivot(r);

  for (std::size_t step = 0; step < p; ++step) {
    std::size_t best = count;
    double best_gain = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      if (taken[i]) continue;
      const double g = location_gain(work, i, count, s, threshold);
      if (g > best_gain) {
        best_gain = g;
        best = i;
      }
    }
    if (best == count) {
      throw ExhaustionError("vector greedy found no location with positive hypervolume at step " +
                                std::to_string(step + 1) + " of " + std::to_string(p),
                            step);
    }
    taken[best] = true;
    picks.push_back(best);
    gains.push_back(best_gain);
    for (std::size_t j = 0; j < s; ++j) {
      const auto row = work.row(best + count * j);
      std::copy(row.begin(), row.end(), pivot.begin());
      linalg::deflate_in_place(work, pivot, threshold);
    }
  }

  SensorSelection sel(std::move(picks), s, count, Method::VectorGreedy);
  sel.gains = std::move(gains);
  return sel;
}

}  // namespace sensorsel::selection
