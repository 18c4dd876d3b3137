#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sensorsel/linalg.hpp"
#include "sensorsel/selection.hpp"
#include "sensorsel/simd/kernels.hpp"

namespace sensorsel::selection {
namespace {

// Lower Cholesky factor in place; false if not positive definite.
bool cholesky(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    const auto lj = a.row(j).first(j);
    double d = a(j, j) - simd::sum_sq(lj);
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      a(i, j) = (a(i, j) - simd::dot(a.row(i).first(j), lj)) / d;
    }
  }
  return true;
}

class Relaxation {
 public:
  Relaxation(const pod::PodBasis& basis, const ConvexOptions& options)
      : modes_(basis.modes),
        count_(basis.locations()),
        components_(basis.components),
        rank_(basis.rank()) {
    double trace = 0.0;
    for (double x : modes_.data()) trace += x * x;
    ridge_ = options.regularization * trace / static_cast<double>(rank_);
  }

  std::size_t count() const { return count_; }

  // sum_i z_i A_i^T A_i + ridge I, factored. Returns false if the factorization fails.
  bool factor(const std::vector<double>& z, Matrix& chol) const {
    chol = Matrix(rank_, rank_);
    for (std::size_t i = 0; i < count_; ++i) {
      if (z[i] == 0.0) continue;
      for (std::size_t j = 0; j < components_; ++j) {
        const auto a = modes_.row(i + count_ * j);
        for (std::size_t k = 0; k < rank_; ++k) {
          // lower triangle only
          simd::axpy(z[i] * a[k], a.first(k + 1), chol.row(k).first(k + 1));
        }
      }
    }
    for (std::size_t k = 0; k < rank_; ++k) chol(k, k) += ridge_;
    return cholesky(chol);
  }

  static double logdet(const Matrix& chol) {
    double acc = 0.0;
    for (std::size_t k = 0; k < chol.rows(); ++k) acc += 2.0 * std::log(chol(k, k));
    return acc;
  }

  double objective(const std::vector<double>& z) const {
    Matrix chol;
    if (!factor(z, chol)) return -std::numeric_limits<double>::infinity();
    return logdet(chol);
  }

  // d/dz_i ln det M = sum over the location's rows a of a M^{-1} a^T = |L^{-1} a^T|^2.
  std::vector<double> gradient(const Matrix& chol) const {
    std::vector<double> g(count_, 0.0);
    Vector w(rank_);
    for (std::size_t i = 0; i < count_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < components_; ++j) {
        const auto a = modes_.row(i + count_ * j);
        for (std::size_t k = 0; k < rank_; ++k) {
          w[k] = (a[k] - simd::dot(chol.row(k).first(k), std::span<const double>(w).first(k))) /
                 chol(k, k);
        }
        acc += simd::sum_sq(w);
      }
      g[i] = acc;
    }
    return g;
  }

 private:
  const Matrix& modes_;
  std::size_t count_;
  std::size_t components_;
  std::size_t rank_;
  double ridge_ = 0.0;
};

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

}  // namespace

std::vector<double> project_capped_simplex(std::vector<double> y, double budget) {
  const auto n = static_cast<double>(y.size());
  if (budget < 0.0 || budget > n) {
    throw ArgumentError("budget " + std::to_string(budget) + " infeasible for " +
                        std::to_string(y.size()) + " weights in [0,1]");
  }
  auto clipped_sum = [&](double tau) {
    double acc = 0.0;
    for (double v : y) acc += std::clamp(v - tau, 0.0, 1.0);
    return acc;
  };
  // clipped_sum is non-increasing in tau; bracket and bisect.
  double lo = *std::min_element(y.begin(), y.end()) - 1.0;
  double hi = *std::max_element(y.begin(), y.end());
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (clipped_sum(mid) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double tau = 0.5 * (lo + hi);
  for (double& v : y) v = std::clamp(v - tau, 0.0, 1.0);
  return y;
}

ConvexSolution solve_convex_relaxation(const pod::PodBasis& basis, std::size_t p,
                                       const ConvexOptions& options) {
  const std::size_t count = basis.locations();
  if (p < 1 || basis.components * p > basis.rank()) {
    throw ArgumentError("convex selection needs 1 <= p and s*p <= r, got s=" +
                        std::to_string(basis.components) + ", p=" + std::to_string(p) +
                        ", r=" + std::to_string(basis.rank()));
  }
  if (p > count) {
    throw ArgumentError("cannot select " + std::to_string(p) + " sensors from " +
                        std::to_string(count) + " locations");
  }
  const Relaxation relax(basis, options);
  ConvexSolution sol;
  sol.weights.assign(count, static_cast<double>(p) / static_cast<double>(count));
  if (p == count) {
    sol.objective = relax.objective(sol.weights);
    return sol;
  }

  Matrix chol;
  if (!relax.factor(sol.weights, chol)) {
    throw NumericalError("relaxed information matrix is not positive definite at start", 0);
  }
  double f = Relaxation::logdet(chol);
  double step = 0.0;
  const auto budget = static_cast<double>(p);

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const std::vector<double> g = relax.gradient(chol);
    std::vector<double> ascent(count);
    for (std::size_t i = 0; i < count; ++i) ascent[i] = sol.weights[i] + g[i];
    sol.gradient_norm = distance(project_capped_simplex(ascent, budget), sol.weights);
    sol.iterations = it;
    if (sol.gradient_norm <= options.gradient_tolerance) {
      sol.objective = f;
      return sol;
    }
    if (step == 0.0) step = 1.0 / *std::max_element(g.begin(), g.end());

    // Armijo backtracking along the projection arc.
    step *= 2.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < count; ++i) ascent[i] = sol.weights[i] + step * g[i];
      std::vector<double> trial = project_capped_simplex(ascent, budget);
      double lin = 0.0;
      for (std::size_t i = 0; i < count; ++i) lin += g[i] * (trial[i] - sol.weights[i]);
      Matrix trial_chol;
      if (relax.factor(trial, trial_chol)) {
        const double ft = Relaxation::logdet(trial_chol);
        if (ft >= f + 1e-4 * lin) {
          sol.weights = std::move(trial);
          chol = std::move(trial_chol);
          f = ft;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  sol.objective = f;
  throw NumericalError("convex relaxation did not converge in " +
                           std::to_string(options.max_iterations) +
                           " iterations (projected gradient norm " +
                           std::to_string(sol.gradient_norm) + ")",
                       sol.iterations, sol.gradient_norm);
}

SensorSelection select_convex(const pod::PodBasis& basis, std::size_t p,
                              const ConvexOptions& options) {
  const ConvexSolution sol = solve_convex_relaxation(basis, p, options);
  std::vector<std::size_t> order(sol.weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sol.weights[a] > sol.weights[b];
  });
  order.resize(p);
  SensorSelection sel(std::move(order), basis.components, basis.locations(), Method::Convex);
  sel.relaxation_objective = sol.objective;
  return sel;
}

}  // namespace sensorsel::selection
