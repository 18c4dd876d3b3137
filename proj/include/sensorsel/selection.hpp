#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sensorsel/matrix.hpp"
#include "sensorsel/pod.hpp"

namespace sensorsel::selection {

enum class Method { ScalarGreedy, VectorGreedy, Random, Convex };

std::string_view method_name(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

// Ordered sensor locations. Location i measures rows i + L*j (j = 0..s-1) of the
// stacked mode matrix, where L is the number of candidate locations.
class SensorSelection {
 public:
  SensorSelection(std::vector<std::size_t> locations, std::size_t components,
                  std::size_t location_count, Method method);

  const std::vector<std::size_t>& locations() const noexcept { return locations_; }
  std::size_t components() const noexcept { return components_; }
  std::size_t location_count() const noexcept { return location_count_; }
  std::size_t size() const noexcept { return locations_.size(); }
  Method method() const noexcept { return method_; }

  // Location-major: all components of the first sensor, then the second, ...
  std::vector<std::size_t> selected_rows() const;
  std::vector<std::size_t> rows_of(std::size_t location) const;

  // Per-step greedy gains J_k (squared norm for scalar, hypervolume squared for vector).
  std::vector<double> gains;
  // Relaxed ln det objective at the convex optimum.
  std::optional<double> relaxation_objective;

 private:
  std::vector<std::size_t> locations_;
  std::size_t components_;
  std::size_t location_count_;
  Method method_;
};

// Reinterpret a selection made on one component block as vector sensors of the
// full stacked basis (each location brings all of its component rows).
SensorSelection as_vector_sensors(const SensorSelection& sel, std::size_t components);

// Greedy QR-style pivoting on rows: pick the largest remaining row, project it out
// of every row, repeat. Requires p <= candidate.cols().
SensorSelection select_scalar_greedy(const Matrix& candidate, std::size_t p);

// Greedy over locations maximizing the product of sequentially orthogonalized squared
// row norms of the location's s rows. Requires s*p <= r.
SensorSelection select_vector_greedy(const pod::PodBasis& basis, std::size_t p);

// Hypervolume gain J_i of location i against the current working matrix; 0 if any
// deflated factor falls below threshold.
double location_gain(const Matrix& working, std::size_t location, std::size_t location_count,
                     std::size_t components, double threshold);

SensorSelection select_random(std::size_t location_count, std::size_t p, std::uint64_t seed,
                              std::size_t components = 1);

struct ConvexOptions {
  std::size_t max_iterations = 500;
  double gradient_tolerance = 1e-6;
  // Ridge added inside ln det, relative to trace(sum_i A_i^T A_i) / r.
  double regularization = 1e-9;
};

struct ConvexSolution {
  std::vector<double> weights;  // relaxed z in [0,1]^L, sum p
  double objective = 0.0;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

// Projected-gradient solve of max ln det(sum_i z_i A_i^T A_i + eps I) subject to
// 0 <= z <= 1, sum z = p.
ConvexSolution solve_convex_relaxation(const pod::PodBasis& basis, std::size_t p,
                                       const ConvexOptions& options = {});

// Relaxation followed by top-p rounding (ties to the lowest index).
SensorSelection select_convex(const pod::PodBasis& basis, std::size_t p,
                              const ConvexOptions& options = {});

// Euclidean projection onto {z : 0 <= z_i <= 1, sum z = budget}.
std::vector<double> project_capped_simplex(std::vector<double> y, double budget);

}  // namespace sensorsel::selection
