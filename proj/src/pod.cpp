#include "sensorsel/pod.hpp"

#include <algorithm>
#include <string>

namespace sensorsel::pod {

SnapshotMatrix::SnapshotMatrix(Matrix data, std::size_t components)
    : data_(std::move(data)), components_(components) {
  if (components_ == 0) throw ArgumentError("component count must be at least 1");
  if (data_.empty() || data_.rows() % components_ != 0) {
    throw ArgumentError(std::to_string(data_.rows()) + " spatial rows cannot be split into " +
                        std::to_string(components_) + " equal component blocks");
  }
}

PodBasis PodBasis::from_modes(Matrix modes, std::size_t components) {
  if (components == 0 || modes.empty() || modes.rows() % components != 0) {
    throw ArgumentError("mode matrix with " + std::to_string(modes.rows()) +
                        " rows cannot be split into " + std::to_string(components) +
                        " component blocks");
  }
  PodBasis b;
  b.mean.assign(modes.rows(), 0.0);
  b.singular_values.assign(modes.cols(), 1.0);
  b.components = components;
  b.modes = std::move(modes);
  return b;
}

PodBasis compute_pod(const SnapshotMatrix& snapshots, std::size_t rank, Centering centering) {
  const Matrix& x = snapshots.data();
  if (rank < 1 || rank > std::min(x.rows(), x.cols())) {
    throw ArgumentError("POD rank " + std::to_string(rank) + " requires 1 <= r <= min(n=" +
                        std::to_string(x.rows()) + ", N=" + std::to_string(x.cols()) + ")");
  }
  PodBasis basis;
  basis.components = snapshots.components();
  basis.mean.assign(x.rows(), 0.0);
  Matrix work = x;
  if (centering == Centering::Subtract) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double acc = 0.0;
      for (double v : x.row(i)) acc += v;
      const double mu = acc / static_cast<double>(x.cols());
      basis.mean[i] = mu;
      for (double& v : work.row(i)) v -= mu;
    }
  }
  linalg::SvdResult svd = linalg::thin_svd(work, rank);
  basis.modes = std::move(svd.left);
  basis.singular_values = std::move(svd.singular_values);
  return basis;
}

Matrix component_block(const PodBasis& basis, std::size_t component) {
  if (component < 1 || component > basis.components) {
    throw ArgumentError("component " + std::to_string(component) + " outside [1, " +
                        std::to_string(basis.components) + "]");
  }
  const std::size_t m = basis.dof_per_component();
  Matrix out(m, basis.rank());
  const auto src = basis.modes.data().subspan((component - 1) * m * basis.rank(), m * basis.rank());
  std::copy(src.begin(), src.end(), out.data().begin());
  return out;
}

Matrix centered(const PodBasis& basis, const SnapshotMatrix& snapshots) {
  if (snapshots.dofs() != basis.dofs() || snapshots.components() != basis.components) {
    throw ArgumentError("snapshots (" + std::to_string(snapshots.dofs()) + " dofs, s=" +
                        std::to_string(snapshots.components()) + ") do not match basis (" +
                        std::to_string(basis.dofs()) + " dofs, s=" +
                        std::to_string(basis.components) + ")");
  }
  Matrix out = snapshots.data();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (double& v : out.row(i)) v -= basis.mean[i];
  }
  return out;
}

Matrix mode_amplitudes(const PodBasis& basis, const SnapshotMatrix& snapshots) {
  return linalg::multiply_at_b(basis.modes, centered(basis, snapshots));
}

double captured_energy(const PodBasis& basis) {
  double e = 0.0;
  for (double s : basis.singular_values) e += s * s;
  return e;
}

}  // namespace sensorsel::pod
