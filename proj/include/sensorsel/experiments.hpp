#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sensorsel/pod.hpp"

namespace sensorsel::experiments {

// Methods compared by the studies. ScalarGreedy carries the 1-based component
// whose block drives the selection.
struct MethodSpec {
  enum class Kind { VectorGreedy, ScalarGreedy, Random, Convex, FullObservation };
  Kind kind = Kind::VectorGreedy;
  std::size_t component = 1;

  std::string name() const;
  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

// Accepts vector-greedy, scalar-greedy-component-<k>, random, convex.
std::optional<MethodSpec> parse_method_spec(std::string_view name);

struct ExperimentConfig {
  std::size_t n_per_component = 1000;
  std::size_t components = 2;
  std::vector<std::size_t> r_values{4, 6, 8, 10};
  std::size_t trials = 100;
  std::uint64_t base_seed = 0;
  std::vector<MethodSpec> methods{{MethodSpec::Kind::VectorGreedy, 1},
                                  {MethodSpec::Kind::ScalarGreedy, 1},
                                  {MethodSpec::Kind::ScalarGreedy, 2},
                                  {MethodSpec::Kind::Random, 1}};
  double noise_sigma = 0.0;
  // Worker threads for independent trials; results do not depend on this.
  std::size_t threads = 1;

  void validate() const;
};

struct Cell {
  std::string method;
  std::size_t r = 0;
  std::size_t p = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t trials = 0;   // used
  std::size_t skipped = 0;  // singular or failed
  std::vector<std::optional<double>> values;  // per trial, nullopt when skipped

  // sd / sqrt(trials)
  double standard_error() const;
};

struct ExperimentReport {
  std::string study;
  ExperimentConfig config;
  std::vector<Cell> cells;
  std::vector<std::uint64_t> trial_seeds;
  double wall_time_seconds = 0.0;

  const Cell* find(std::string_view method, std::size_t r) const;
};

// splitmix64 finalizer of base_seed + trial.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);
// Derived stream for (trial seed, r, purpose tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Stacked Gaussian N(0,1) candidate matrix: s blocks of n_per_component x r.
Matrix gaussian_candidates(std::size_t n_per_component, std::size_t components, std::size_t r,
                           std::uint64_t seed);

ExperimentReport run_random_benchmark(const ExperimentConfig& cfg);

// cfg.methods plus a full-observation reference row.
ExperimentReport run_reconstruction_study(const ExperimentConfig& cfg,
                                          const pod::SnapshotMatrix& data);

pod::SnapshotMatrix generate_synthetic_flow(std::size_t n_per_component, std::size_t components,
                                            std::size_t true_rank, std::size_t snapshots,
                                            std::uint64_t seed, double noise_sigma);

// Gap between two cells' means, in units of the pooled standard error
// sqrt(se_a^2 + se_b^2). Positive when a's mean is larger.
double separation(const Cell& a, const Cell& b);

}  // namespace sensorsel::experiments
