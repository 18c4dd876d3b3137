#pragma once

#include <cstdint>

#include "sensorsel/matrix.hpp"
#include "sensorsel/pod.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel::evaluate {

// C = H_s U: rows of the basis gathered in selection order.
struct MeasurementModel {
  Matrix c;
  selection::SensorSelection selection;
  std::size_t dofs = 0;
  std::size_t rank = 0;
  std::size_t components = 1;
};

MeasurementModel build_model(const pod::PodBasis& basis, const selection::SensorSelection& sel);

struct LogDetScore {
  double value = 0.0;  // -inf when singular
  bool singular = false;
};

// ln|det C| for square C, 1/2 ln det(C C^T) when C is wide. Singular C yields the
// -inf sentinel instead of throwing.
LogDetScore score_logdet(const MeasurementModel& model);
LogDetScore score_logdet(const Matrix& c);

struct ObservationNoise {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// (s*p) x N sensor readings of the centered field, plus optional i.i.d. Gaussian noise.
Matrix observe(const pod::PodBasis& basis, const selection::SensorSelection& sel,
               const pod::SnapshotMatrix& field, ObservationNoise noise = {});

void add_noise(Matrix& m, ObservationNoise noise);

struct ReconstructionResult {
  Matrix amplitudes;  // r x N
  Vector residual_norms;
  bool rank_flag = false;
  std::size_t rank = 0;
};

// Column-wise minimum-norm least squares C x = y.
ReconstructionResult reconstruct(const MeasurementModel& model, const Matrix& observations);
ReconstructionResult reconstruct(const Matrix& c, const Matrix& observations);

// Relative Frobenius error sqrt(sum (x - x_rec)^2 / sum x^2).
double reconstruction_error(const Matrix& truth, const Matrix& reconstructed);

}  // namespace sensorsel::evaluate
