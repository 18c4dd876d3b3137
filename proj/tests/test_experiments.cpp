#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sensorsel/experiments.hpp"
#include "sensorsel/io.hpp"
#include "sensorsel/linalg.hpp"

namespace ex = sensorsel::experiments;
namespace pod = sensorsel::pod;
namespace la = sensorsel::linalg;

namespace {

ex::ExperimentConfig small_config() {
  ex::ExperimentConfig cfg;
  cfg.n_per_component = 60;
  cfg.components = 2;
  cfg.r_values = {4, 6};
  cfg.trials = 3;
  cfg.base_seed = 11;
  return cfg;
}

}  // namespace

TEST(RandomBenchmark, DeterministicReport) {
  auto cfg = small_config();
  cfg.trials = 1;
  const auto a = ex::run_random_benchmark(cfg);
  const auto b = ex::run_random_benchmark(cfg);
  EXPECT_EQ(sensorsel::io::report_to_json(a, false), sensorsel::io::report_to_json(b, false));
  EXPECT_EQ(a.cells.size(), cfg.r_values.size() * cfg.methods.size());
}

TEST(RandomBenchmark, ThreadCountDoesNotChangeResults) {
  auto cfg = small_config();
  cfg.trials = 8;
  const auto serial = ex::run_random_benchmark(cfg);
  cfg.threads = 4;
  const auto parallel = ex::run_random_benchmark(cfg);
  ASSERT_EQ(serial.cells.size(), parallel.cells.size());
  for (std::size_t k = 0; k < serial.cells.size(); ++k) {
    EXPECT_EQ(serial.cells[k].values, parallel.cells[k].values);
  }
}

TEST(RandomBenchmark, SingleSensorGreedyBeatsRandom) {
  ex::ExperimentConfig cfg;
  cfg.n_per_component = 200;
  cfg.components = 2;
  cfg.r_values = {2};
  cfg.trials = 30;
  cfg.methods = {*ex::parse_method_spec("vector-greedy"), *ex::parse_method_spec("random")};
  const auto report = ex::run_random_benchmark(cfg);
  EXPECT_GE(report.find("vector-greedy", 2)->mean, report.find("random", 2)->mean);
  for (const auto& v : report.find("vector-greedy", 2)->values) {
    ASSERT_TRUE(v.has_value());
  }
}

TEST(RandomBenchmark, SkipAccountingAddsUp) {
  auto cfg = small_config();
  cfg.methods.push_back(*ex::parse_method_spec("convex"));
  const auto report = ex::run_random_benchmark(cfg);
  for (const auto& cell : report.cells) {
    EXPECT_EQ(cell.trials + cell.skipped, cfg.trials);
    EXPECT_EQ(cell.p, cell.r / 2);
  }
}

TEST(ExperimentConfig, Validation) {
  auto cfg = small_config();
  cfg.r_values = {5};
  EXPECT_THROW(cfg.validate(), sensorsel::ArgumentError);
  cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), sensorsel::ArgumentError);
  cfg = small_config();
  cfg.methods = {*ex::parse_method_spec("scalar-greedy-component-3")};
  EXPECT_THROW(cfg.validate(), sensorsel::ArgumentError);
}

TEST(MethodSpec, ParseAndName) {
  for (const char* name : {"vector-greedy", "random", "convex", "scalar-greedy-component-2"}) {
    const auto m = ex::parse_method_spec(name);
    ASSERT_TRUE(m.has_value()) << name;
    EXPECT_EQ(m->name(), name);
  }
  EXPECT_FALSE(ex::parse_method_spec("scalar-greedy-component-0"));
  EXPECT_FALSE(ex::parse_method_spec("scalar-greedy-component-x"));
  EXPECT_FALSE(ex::parse_method_spec("full-observation"));
}

TEST(SyntheticFlow, HasExactNumericalRank) {
  const auto data = ex::generate_synthetic_flow(40, 2, 6, 50, 3, 0.0);
  const auto svd = la::thin_svd(data.data(), 20);
  for (std::size_t i = 6; i < 20; ++i) EXPECT_LE(svd.singular_values[i], 1e-10 * svd.singular_values[0]);
  EXPECT_GT(svd.singular_values[5], 1e-3 * svd.singular_values[0]);
}

TEST(SyntheticFlow, Reproducible) {
  EXPECT_EQ(ex::generate_synthetic_flow(10, 3, 4, 20, 8, 0.1).data(),
            ex::generate_synthetic_flow(10, 3, 4, 20, 8, 0.1).data());
  EXPECT_THROW(ex::generate_synthetic_flow(2, 2, 5, 20, 8, 0.0), sensorsel::ArgumentError);
}

TEST(SyntheticFlow, PodCapturesAllEnergyAtTrueRank) {
  const auto data = ex::generate_synthetic_flow(50, 2, 8, 60, 21, 0.0);
  const auto basis = pod::compute_pod(data, 8);
  const double total = std::pow(oracle::frob(pod::centered(basis, data)), 2);
  EXPECT_GE(pod::captured_energy(basis) / total, 1.0 - 1e-12);
}

TEST(ReconstructionStudy, NoiselessGreedyIsExact) {
  for (std::size_t r : {4, 8}) {
    ex::ExperimentConfig cfg;
    cfg.n_per_component = 50;
    cfg.components = 2;
    cfg.r_values = {r};
    cfg.trials = 2;
    cfg.methods = {*ex::parse_method_spec("vector-greedy"), *ex::parse_method_spec("random")};
    const auto data = ex::generate_synthetic_flow(50, 2, r, 80, 4 + r, 0.0);
    const auto report = ex::run_reconstruction_study(cfg, data);
    EXPECT_LE(report.find("vector-greedy", r)->mean, 1e-8) << r;
    EXPECT_LE(report.find("full-observation", r)->mean, 1e-8) << r;
  }
}

TEST(ReconstructionStudy, NoisyOrdering) {
  ex::ExperimentConfig cfg;
  cfg.n_per_component = 80;
  cfg.components = 2;
  cfg.r_values = {4, 8};
  cfg.trials = 20;
  cfg.noise_sigma = 0.01;
  cfg.methods = {*ex::parse_method_spec("vector-greedy"), *ex::parse_method_spec("random")};
  const auto data = ex::generate_synthetic_flow(80, 2, 8, 100, 5, 0.0);
  const auto report = ex::run_reconstruction_study(cfg, data);
  for (std::size_t r : cfg.r_values) {
    EXPECT_LE(report.find("full-observation", r)->mean, report.find("vector-greedy", r)->mean);
    EXPECT_LE(report.find("vector-greedy", r)->mean, report.find("random", r)->mean);
  }
}

TEST(Seeds, TrialSeedsDifferAndDeriveDeterministically) {
  EXPECT_NE(ex::trial_seed(0, 0), ex::trial_seed(0, 1));
  EXPECT_EQ(ex::derive_seed(5, 1, 2), ex::derive_seed(5, 1, 2));
  EXPECT_NE(ex::derive_seed(5, 1, 2), ex::derive_seed(5, 2, 1));
}
