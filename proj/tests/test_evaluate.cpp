#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sensorsel/evaluate.hpp"
#include "sensorsel/linalg.hpp"

using sensorsel::Matrix;
using sensorsel::Vector;
namespace ev = sensorsel::evaluate;
namespace sel = sensorsel::selection;
namespace pod = sensorsel::pod;
namespace la = sensorsel::linalg;

namespace {

pod::PodBasis orthonormal_basis(std::size_t n, std::size_t r, std::size_t s, std::uint64_t seed) {
  return pod::PodBasis::from_modes(la::thin_svd(oracle::gaussian(n, r, seed), r).left, s);
}

}  // namespace

TEST(BuildModel, GathersLocationRows) {
  const auto basis = pod::PodBasis::from_modes(Matrix::identity(4), 2);
  const sel::SensorSelection s({0}, 2, 2, sel::Method::VectorGreedy);
  const auto model = ev::build_model(basis, s);
  EXPECT_EQ(model.c, (Matrix{{1, 0, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_EQ(model.rank, 4u);
  EXPECT_EQ(model.components, 2u);
}

TEST(BuildModel, FullObservationIsModes) {
  const auto basis = pod::PodBasis::from_modes(oracle::gaussian(5, 5, 1), 1);
  const sel::SensorSelection s({0, 1, 2, 3, 4}, 1, 5, sel::Method::Random);
  EXPECT_EQ(ev::build_model(basis, s).c, basis.modes);
}

TEST(BuildModel, RowsAreBitIdentical) {
  const auto basis = pod::PodBasis::from_modes(oracle::gaussian(30, 6, 2), 3);
  const auto s = sel::select_random(10, 2, 17, 3);
  const auto model = ev::build_model(basis, s);
  const auto rows = s.selected_rows();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(model.c(k, j), basis.modes(rows[k], j));
  }
}

TEST(BuildModel, LayoutMismatch) {
  const auto basis = pod::PodBasis::from_modes(oracle::gaussian(8, 4, 2), 2);
  EXPECT_THROW(ev::build_model(basis, sel::SensorSelection({0}, 1, 8, sel::Method::Random)),
               sensorsel::ArgumentError);
}

TEST(ScoreLogdet, IdentityAndDiagonal) {
  EXPECT_EQ(ev::score_logdet(Matrix::identity(4)).value, 0.0);
  EXPECT_NEAR(ev::score_logdet(Matrix{{2, 0}, {0, 3}}).value, std::log(6.0), 1e-15);
}

TEST(ScoreLogdet, CofactorOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix c = oracle::gaussian(6, 6, seed + 40);
    const double expected = std::log(std::abs(oracle::cofactor_det(c)));
    EXPECT_NEAR(ev::score_logdet(c).value, expected, 1e-9);
  }
}

TEST(ScoreLogdet, WideAndSquareFormsAgree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix c = oracle::gaussian(5, 5, seed);
    const double half = 0.5 * la::log_abs_det(la::gram_rows(c));
    EXPECT_NEAR(ev::score_logdet(c).value, half, 1e-9);
  }
  const Matrix wide = oracle::gaussian(3, 7, 1);
  const double expected = 0.5 * std::log(oracle::gram_det(wide, {0, 1, 2}));
  EXPECT_NEAR(ev::score_logdet(wide).value, expected, 1e-10);
}

TEST(ScoreLogdet, SingularGivesSentinel) {
  const auto s = ev::score_logdet(Matrix{{1, 2}, {2, 4}});
  EXPECT_TRUE(s.singular);
  EXPECT_EQ(s.value, -std::numeric_limits<double>::infinity());
  EXPECT_THROW(ev::score_logdet(Matrix(3, 2, 1.0)), sensorsel::ArgumentError);
}

TEST(Observe, FullNoiselessIsCenteredField) {
  const pod::SnapshotMatrix field(oracle::gaussian(6, 9, 3), 1);
  const auto basis = pod::compute_pod(field, 4);
  const sel::SensorSelection all({0, 1, 2, 3, 4, 5}, 1, 6, sel::Method::Random);
  EXPECT_EQ(ev::observe(basis, all, field), pod::centered(basis, field));
}

TEST(Observe, ZeroFieldGivesZero) {
  const auto basis = orthonormal_basis(10, 4, 2, 1);
  const auto y = ev::observe(basis, sel::select_random(5, 2, 1, 2),
                             pod::SnapshotMatrix(Matrix(10, 3), 2));
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
}

TEST(Observe, RankRFieldEqualsCTimesAmplitudes) {
  const auto basis = orthonormal_basis(20, 4, 2, 5);
  const Matrix a = oracle::gaussian(4, 6, 6);
  const pod::SnapshotMatrix field(oracle::matmul(basis.modes, a), 2);
  const auto s = sel::select_vector_greedy(basis, 2);
  const auto y = ev::observe(basis, s, field);
  EXPECT_LE(oracle::max_abs_diff(y, oracle::matmul(ev::build_model(basis, s).c, a)), 1e-12);
}

TEST(Observe, Linear) {
  const auto basis = orthonormal_basis(12, 4, 2, 2);
  const Matrix f1 = oracle::gaussian(12, 5, 3);
  const Matrix f2 = oracle::gaussian(12, 5, 4);
  Matrix combo(12, 5);
  for (std::size_t k = 0; k < combo.data().size(); ++k) {
    combo.data()[k] = 2.0 * f1.data()[k] - 0.5 * f2.data()[k];
  }
  const auto s = sel::select_random(6, 2, 9, 2);
  const auto y1 = ev::observe(basis, s, pod::SnapshotMatrix(f1, 2));
  const auto y2 = ev::observe(basis, s, pod::SnapshotMatrix(f2, 2));
  const auto yc = ev::observe(basis, s, pod::SnapshotMatrix(combo, 2));
  for (std::size_t k = 0; k < yc.data().size(); ++k) {
    EXPECT_NEAR(yc.data()[k], 2.0 * y1.data()[k] - 0.5 * y2.data()[k], 1e-12);
  }
}

TEST(Observe, NoiseIsSeeded) {
  const auto basis = orthonormal_basis(12, 4, 2, 2);
  const pod::SnapshotMatrix field(oracle::gaussian(12, 5, 3), 2);
  const auto s = sel::select_random(6, 2, 9, 2);
  const auto a = ev::observe(basis, s, field, {0.1, 5});
  const auto b = ev::observe(basis, s, field, {0.1, 5});
  const auto clean = ev::observe(basis, s, field);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, clean);
  EXPECT_LE(oracle::max_abs_diff(a, clean), 1.0);
  EXPECT_THROW(ev::observe(basis, s, pod::SnapshotMatrix(Matrix(6, 2), 1)), sensorsel::ArgumentError);
}

TEST(Reconstruct, IdentityModel) {
  const Matrix y = oracle::gaussian(4, 3, 1);
  const auto rec = ev::reconstruct(Matrix::identity(4), y);
  EXPECT_LE(oracle::max_abs_diff(rec.amplitudes, y), 1e-15);
  EXPECT_FALSE(rec.rank_flag);
}

TEST(Reconstruct, ConsistentSquareSystem) {
  const Matrix c = oracle::gaussian(6, 6, 3);
  const Matrix x = oracle::gaussian(6, 4, 4);
  const auto rec = ev::reconstruct(c, oracle::matmul(c, x));
  EXPECT_LE(oracle::frob([&] {
              Matrix d = rec.amplitudes;
              for (std::size_t k = 0; k < d.data().size(); ++k) d.data()[k] -= x.data()[k];
              return d;
            }()),
            1e-10 * oracle::frob(x));
}

TEST(Reconstruct, ResidualNormsMatchRecomputation) {
  const auto basis = orthonormal_basis(40, 6, 2, 8);
  const pod::SnapshotMatrix field(oracle::matmul(basis.modes, oracle::gaussian(6, 10, 1)), 2);
  const auto s = sel::select_vector_greedy(basis, 3);
  const auto model = ev::build_model(basis, s);
  const auto y = ev::observe(basis, s, field, {0.01, 3});
  const auto rec = ev::reconstruct(model, y);
  const Matrix fit = oracle::matmul(model.c, rec.amplitudes);
  for (std::size_t t = 0; t < 10; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 6; ++i) acc += (fit(i, t) - y(i, t)) * (fit(i, t) - y(i, t));
    EXPECT_NEAR(rec.residual_norms[t], std::sqrt(acc), 1e-12);
  }
}

TEST(Reconstruct, RankDeficientIsFlagged) {
  const auto rec = ev::reconstruct(Matrix{{1, 2}, {2, 4}}, Matrix{{1}, {2}});
  EXPECT_TRUE(rec.rank_flag);
  EXPECT_EQ(rec.rank, 1u);
  EXPECT_THROW(ev::reconstruct(Matrix::identity(3), Matrix(2, 1)), sensorsel::ArgumentError);
}

TEST(ReconstructionError, AlgebraicCases) {
  const Matrix x = oracle::gaussian(4, 6, 2);
  Matrix doubled = x;
  for (double& v : doubled.data()) v *= 2.0;
  EXPECT_EQ(ev::reconstruction_error(x, x), 0.0);
  EXPECT_DOUBLE_EQ(ev::reconstruction_error(x, Matrix(4, 6)), 1.0);
  EXPECT_DOUBLE_EQ(ev::reconstruction_error(x, doubled), 1.0);
}

TEST(ReconstructionError, ColumnPermutationInvariant) {
  const Matrix x = oracle::gaussian(3, 5, 2);
  const Matrix y = oracle::gaussian(3, 5, 3);
  Matrix xp(3, 5), yp(3, 5);
  const std::size_t perm[] = {4, 2, 0, 1, 3};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      xp(i, j) = x(i, perm[j]);
      yp(i, j) = y(i, perm[j]);
    }
  }
  EXPECT_NEAR(ev::reconstruction_error(x, y), ev::reconstruction_error(xp, yp), 1e-15);
}

TEST(ReconstructionError, Errors) {
  EXPECT_THROW(ev::reconstruction_error(Matrix(2, 2), Matrix(2, 2)), sensorsel::ArgumentError);
  EXPECT_THROW(ev::reconstruction_error(Matrix(2, 2, 1.0), Matrix(2, 3)), sensorsel::ArgumentError);
}
