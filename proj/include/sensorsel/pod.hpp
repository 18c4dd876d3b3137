#pragma once

#include <cstddef>

#include "sensorsel/linalg.hpp"
#include "sensorsel/matrix.hpp"

namespace sensorsel::pod {

// Spatial dofs x snapshots. Component j (0-based) occupies rows
// [j * dof_per_component, (j + 1) * dof_per_component), i.e. X = [X_1; X_2; ...].
class SnapshotMatrix {
 public:
  SnapshotMatrix(Matrix data, std::size_t components);

  const Matrix& data() const noexcept { return data_; }
  std::size_t components() const noexcept { return components_; }
  std::size_t dof_per_component() const noexcept { return data_.rows() / components_; }
  std::size_t dofs() const noexcept { return data_.rows(); }
  std::size_t snapshots() const noexcept { return data_.cols(); }

 private:
  Matrix data_;
  std::size_t components_;
};

struct PodBasis {
  Matrix modes;            // n x r, orthonormal columns
  Vector singular_values;  // r, non-increasing
  Vector mean;             // n, temporal mean removed before the SVD (zeros if not centered)
  std::size_t components = 1;

  std::size_t dofs() const noexcept { return modes.rows(); }
  std::size_t rank() const noexcept { return modes.cols(); }
  std::size_t dof_per_component() const noexcept { return modes.rows() / components; }
  std::size_t locations() const noexcept { return dof_per_component(); }

  // Wrap an existing mode matrix (e.g. read from disk, or a random candidate
  // matrix) without re-orthonormalizing it.
  static PodBasis from_modes(Matrix modes, std::size_t components);
};

enum class Centering { Subtract, None };

PodBasis compute_pod(const SnapshotMatrix& snapshots, std::size_t rank,
                     Centering centering = Centering::Subtract);

// (n/s) x r row block of the modes for 1-based component j.
Matrix component_block(const PodBasis& basis, std::size_t component);

// r x N true amplitudes: modes^T (X - mean).
Matrix mode_amplitudes(const PodBasis& basis, const SnapshotMatrix& snapshots);

// X - mean 1^T
Matrix centered(const PodBasis& basis, const SnapshotMatrix& snapshots);

// Sum of squared singular values of the leading r modes.
double captured_energy(const PodBasis& basis);

}  // namespace sensorsel::pod
