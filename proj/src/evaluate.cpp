#include "sensorsel/evaluate.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sensorsel/linalg.hpp"

namespace sensorsel::evaluate {

MeasurementModel build_model(const pod::PodBasis& basis, const selection::SensorSelection& sel) {
  if (sel.components() != basis.components || sel.location_count() != basis.locations()) {
    throw ArgumentError("selection over " + std::to_string(sel.location_count()) +
                        " locations x " + std::to_string(sel.components()) +
                        " components does not match basis with " +
                        std::to_string(basis.locations()) + " locations x " +
                        std::to_string(basis.components) + " components");
  }
  const std::vector<std::size_t> rows = sel.selected_rows();
  return MeasurementModel{linalg::gather_rows(basis.modes, rows), sel, basis.dofs(), basis.rank(),
                          basis.components};
}

LogDetScore score_logdet(const Matrix& c) {
  if (c.rows() > c.cols()) {
    throw ArgumentError("log-det score needs s*p <= r, got " + std::to_string(c.rows()) +
                        " rows for rank " + std::to_string(c.cols()));
  }
  try {
    if (c.is_square()) return {linalg::log_abs_det(c), false};
    return {0.5 * linalg::log_abs_det(linalg::gram_rows(c)), false};
  } catch (const SingularMatrixError&) {
    return {-std::numeric_limits<double>::infinity(), true};
  }
}

LogDetScore score_logdet(const MeasurementModel& model) { return score_logdet(model.c); }

void add_noise(Matrix& m, ObservationNoise noise) {
  if (noise.sigma < 0.0) throw ArgumentError("noise sigma must be nonnegative");
  if (noise.sigma == 0.0) return;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  for (double& v : m.data()) v += gauss(rng);
}

Matrix observe(const pod::PodBasis& basis, const selection::SensorSelection& sel,
               const pod::SnapshotMatrix& field, ObservationNoise noise) {
  if (sel.components() != basis.components || sel.location_count() != basis.locations()) {
    throw ArgumentError("selection does not match basis layout");
  }
  const std::vector<std::size_t> rows = sel.selected_rows();
  Matrix y(rows.size(), field.snapshots());
  const Matrix& x = field.data();
  if (field.dofs() != basis.dofs() || field.components() != basis.components) {
    throw ArgumentError("field with " + std::to_string(field.dofs()) +
                        " dofs does not match basis with " + std::to_string(basis.dofs()));
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double mu = basis.mean[rows[k]];
    const auto src = x.row(rows[k]);
    auto dst = y.row(k);
    for (std::size_t t = 0; t < src.size(); ++t) dst[t] = src[t] - mu;
  }
  add_noise(y, noise);
  return y;
}

ReconstructionResult reconstruct(const Matrix& c, const Matrix& observations) {
  if (observations.rows() != c.rows()) {
    throw ArgumentError("observations have " + std::to_string(observations.rows()) +
                        " rows, measurement model has " + std::to_string(c.rows()));
  }
  linalg::LeastSquaresBatch ls = linalg::solve_least_squares(c, observations);
  ReconstructionResult out;
  out.rank = ls.rank;
  out.rank_flag = ls.rank_deficient;
  const Matrix fitted = linalg::multiply(c, ls.x);
  out.residual_norms.resize(observations.cols());
  for (std::size_t t = 0; t < observations.cols(); ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      const double d = fitted(i, t) - observations(i, t);
      acc += d * d;
    }
    out.residual_norms[t] = std::sqrt(acc);
  }
  out.amplitudes = std::move(ls.x);
  return out;
}

ReconstructionResult reconstruct(const MeasurementModel& model, const Matrix& observations) {
  return reconstruct(model.c, observations);
}

double reconstruction_error(const Matrix& truth, const Matrix& reconstructed) {
  if (truth.rows() != reconstructed.rows() || truth.cols() != reconstructed.cols()) {
    throw ArgumentError("amplitude shapes differ: " + std::to_string(truth.rows()) + "x" +
                        std::to_string(truth.cols()) + " vs " +
                        std::to_string(reconstructed.rows()) + "x" +
                        std::to_string(reconstructed.cols()));
  }
  double num = 0.0;
  double den = 0.0;
  const auto a = truth.data();
  const auto b = reconstructed.data();
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += a[k] * a[k];
  }
  if (den == 0.0) throw ArgumentError("true amplitudes are identically zero");
  return std::sqrt(num / den);
}

}  // namespace sensorsel::evaluate
