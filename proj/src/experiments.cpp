#include "sensorsel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "sensorsel/evaluate.hpp"
#include "sensorsel/linalg.hpp"
#include "sensorsel/selection.hpp"
#include "sensorsel/simd/kernels.hpp"

namespace sensorsel::experiments {

namespace {

constexpr std::string_view kScalarPrefix = "scalar-greedy-component-";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

enum : std::uint64_t { kTagCandidates = 1, kTagRandomSelection = 2, kTagNoise = 3 };

// Runs body(t) for t in [0, trials) on up to `threads` workers.
void for_each_trial(std::size_t trials, std::size_t threads,
                    const std::function<void(std::size_t)>& body) {
  threads = std::clamp<std::size_t>(threads, 1, trials);
  if (threads == 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < trials && !failed; t = next++) {
          try {
            body(t);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void aggregate(Cell& cell) {
  double sum = 0.0;
  cell.trials = 0;
  cell.skipped = 0;
  for (const auto& v : cell.values) {
    if (v) {
      sum += *v;
      ++cell.trials;
    } else {
      ++cell.skipped;
    }
  }
  if (cell.trials == 0) {
    cell.mean = std::numeric_limits<double>::quiet_NaN();
    cell.stddev = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  cell.mean = sum / static_cast<double>(cell.trials);
  double ss = 0.0;
  for (const auto& v : cell.values) {
    if (v) ss += (*v - cell.mean) * (*v - cell.mean);
  }
  cell.stddev = cell.trials > 1 ? std::sqrt(ss / static_cast<double>(cell.trials - 1)) : 0.0;
}

selection::SensorSelection select_with(const MethodSpec& m, const pod::PodBasis& basis,
                                       std::size_t p, std::uint64_t random_seed) {
  switch (m.kind) {
    case MethodSpec::Kind::VectorGreedy: return selection::select_vector_greedy(basis, p);
    case MethodSpec::Kind::ScalarGreedy: {
      const Matrix block = pod::component_block(basis, m.component);
      return selection::as_vector_sensors(selection::select_scalar_greedy(block, p),
                                          basis.components);
    }
    case MethodSpec::Kind::Random:
      return selection::select_random(basis.locations(), p, random_seed, basis.components);
    case MethodSpec::Kind::Convex: return selection::select_convex(basis, p);
    case MethodSpec::Kind::FullObservation: break;
  }
  throw ArgumentError("method " + m.name() + " does not produce a sparse selection");
}

}  // namespace

std::string MethodSpec::name() const {
  switch (kind) {
    case Kind::VectorGreedy: return "vector-greedy";
    case Kind::ScalarGreedy: return std::string(kScalarPrefix) + std::to_string(component);
    case Kind::Random: return "random";
    case Kind::Convex: return "convex";
    case Kind::FullObservation: return "full-observation";
  }
  return "unknown";
}

std::optional<MethodSpec> parse_method_spec(std::string_view name) {
  using K = MethodSpec::Kind;
  if (name == "vector-greedy") return MethodSpec{K::VectorGreedy, 1};
  if (name == "random") return MethodSpec{K::Random, 1};
  if (name == "convex") return MethodSpec{K::Convex, 1};
  if (name.starts_with(kScalarPrefix)) {
    const std::string_view digits = name.substr(kScalarPrefix.size());
    if (digits.empty() || digits.size() > 3 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    const std::size_t k = std::stoul(std::string(digits));
    if (k == 0) return std::nullopt;
    return MethodSpec{K::ScalarGreedy, k};
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (components < 1) throw ArgumentError("s must be at least 1");
  if (n_per_component < 1) throw ArgumentError("n_per_component must be at least 1");
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  if (r_values.empty()) throw ArgumentError("r_values must not be empty");
  if (methods.empty()) throw ArgumentError("methods must not be empty");
  if (!(noise_sigma >= 0.0)) throw ArgumentError("noise_sigma must be nonnegative");
  for (std::size_t r : r_values) {
    if (r == 0 || r % components != 0) {
      throw ArgumentError("r=" + std::to_string(r) + " is not a positive multiple of s=" +
                          std::to_string(components));
    }
    if (r / components > n_per_component) {
      throw ArgumentError("r=" + std::to_string(r) + " needs more than " +
                          std::to_string(n_per_component) + " locations");
    }
  }
  for (const MethodSpec& m : methods) {
    if (m.kind == MethodSpec::Kind::ScalarGreedy && m.component > components) {
      throw ArgumentError("method " + m.name() + " refers to a component beyond s=" +
                          std::to_string(components));
    }
    if (m.kind == MethodSpec::Kind::FullObservation) {
      throw ArgumentError("full-observation is added automatically to reconstruction studies");
    }
  }
}

double Cell::standard_error() const {
  return trials == 0 ? std::numeric_limits<double>::quiet_NaN()
                     : stddev / std::sqrt(static_cast<double>(trials));
}

const Cell* ExperimentReport::find(std::string_view method, std::size_t r) const {
  for (const Cell& c : cells) {
    if (c.method == method && c.r == r) return &c;
  }
  return nullptr;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return splitmix64(base_seed + static_cast<std::uint64_t>(trial));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(seed ^ splitmix64(a)) + b);
}

Matrix gaussian_candidates(std::size_t n_per_component, std::size_t components, std::size_t r,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix u(n_per_component * components, r);
  for (double& v : u.data()) v = gauss(rng);
  return u;
}

double separation(const Cell& a, const Cell& b) {
  const double se = std::hypot(a.standard_error(), b.standard_error());
  return (a.mean - b.mean) / se;
}

namespace {

std::vector<Cell> make_cells(const std::vector<MethodSpec>& methods, const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (std::size_t r : cfg.r_values) {
    for (const MethodSpec& m : methods) {
      Cell c;
      c.method = m.name();
      c.r = r;
      c.p = r / cfg.components;
      c.values.assign(cfg.trials, std::nullopt);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

}  // namespace

ExperimentReport run_random_benchmark(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.study = "random-benchmark";
  report.config = cfg;
  report.cells = make_cells(cfg.methods, cfg);
  report.trial_seeds.resize(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) report.trial_seeds[t] = trial_seed(cfg.base_seed, t);

  const std::size_t n_methods = cfg.methods.size();
  for_each_trial(cfg.trials, cfg.threads, [&](std::size_t t) {
    const std::uint64_t seed = report.trial_seeds[t];
    for (std::size_t ri = 0; ri < cfg.r_values.size(); ++ri) {
      const std::size_t r = cfg.r_values[ri];
      const std::size_t p = r / cfg.components;
      // Every method in this (trial, r) cell sees the same candidate matrix.
      const pod::PodBasis basis = pod::PodBasis::from_modes(
          gaussian_candidates(cfg.n_per_component, cfg.components, r,
                              derive_seed(seed, kTagCandidates, r)),
          cfg.components);
      for (std::size_t mi = 0; mi < n_methods; ++mi) {
        Cell& cell = report.cells[ri * n_methods + mi];
        try {
          const auto sel =
              select_with(cfg.methods[mi], basis, p, derive_seed(seed, kTagRandomSelection, r));
          const auto score = evaluate::score_logdet(evaluate::build_model(basis, sel));
          if (!score.singular) cell.values[t] = score.value;
        } catch (const NumericalError&) {
          // counted as skipped
        }
      }
    }
  });

  for (Cell& c : report.cells) aggregate(c);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExperimentReport run_reconstruction_study(const ExperimentConfig& cfg,
                                          const pod::SnapshotMatrix& data) {
  cfg.validate();
  if (data.components() != cfg.components) {
    throw ArgumentError("data has " + std::to_string(data.components()) +
                        " components, config says " + std::to_string(cfg.components));
  }
  const std::size_t max_r = *std::max_element(cfg.r_values.begin(), cfg.r_values.end());
  if (max_r > std::min(data.dofs(), data.snapshots())) {
    throw ArgumentError("data of size " + std::to_string(data.dofs()) + "x" +
                        std::to_string(data.snapshots()) + " cannot support r=" +
                        std::to_string(max_r));
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<MethodSpec> methods = cfg.methods;
  methods.push_back({MethodSpec::Kind::FullObservation, 1});

  ExperimentReport report;
  report.study = "reconstruction";
  report.config = cfg;
  report.cells = make_cells(methods, cfg);
  report.trial_seeds.resize(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) report.trial_seeds[t] = trial_seed(cfg.base_seed, t);

  const std::size_t n_methods = methods.size();
  for (std::size_t ri = 0; ri < cfg.r_values.size(); ++ri) {
    const std::size_t r = cfg.r_values[ri];
    const std::size_t p = r / cfg.components;
    const pod::PodBasis basis = pod::compute_pod(data, r);
    const Matrix truth = pod::mode_amplitudes(basis, data);
    const Matrix fluct = pod::centered(basis, data);

    // Deterministic selections are shared by all trials.
    std::vector<std::optional<selection::SensorSelection>> fixed(n_methods);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const auto kind = methods[mi].kind;
      if (kind == MethodSpec::Kind::Random || kind == MethodSpec::Kind::FullObservation) continue;
      try {
        fixed[mi] = select_with(methods[mi], basis, p, 0);
      } catch (const NumericalError&) {
      }
    }

    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t t) {
      const std::uint64_t seed = report.trial_seeds[t];
      const evaluate::ObservationNoise noise{cfg.noise_sigma, derive_seed(seed, kTagNoise, r)};
      for (std::size_t mi = 0; mi < n_methods; ++mi) {
        Cell& cell = report.cells[ri * n_methods + mi];
        const MethodSpec& m = methods[mi];
        if (m.kind == MethodSpec::Kind::FullObservation) {
          Matrix y = fluct;
          evaluate::add_noise(y, noise);
          const auto rec = evaluate::reconstruct(basis.modes, y);
          cell.values[t] = evaluate::reconstruction_error(truth, rec.amplitudes);
          continue;
        }
        std::optional<selection::SensorSelection> sel = fixed[mi];
        if (m.kind == MethodSpec::Kind::Random) {
          sel = select_with(m, basis, p, derive_seed(seed, kTagRandomSelection, r));
        }
        if (!sel) continue;
        const auto model = evaluate::build_model(basis, *sel);
        if (evaluate::score_logdet(model).singular) continue;
        const Matrix y = evaluate::observe(basis, *sel, data, noise);
        const auto rec = evaluate::reconstruct(model, y);
        cell.values[t] = evaluate::reconstruction_error(truth, rec.amplitudes);
      }
    });
  }

  for (Cell& c : report.cells) aggregate(c);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

pod::SnapshotMatrix generate_synthetic_flow(std::size_t n_per_component, std::size_t components,
                                            std::size_t true_rank, std::size_t snapshots,
                                            std::uint64_t seed, double noise_sigma) {
  const std::size_t n = n_per_component * components;
  if (components < 1 || n_per_component < 1 || snapshots < 1) {
    throw ArgumentError("synthetic flow needs positive sizes");
  }
  if (true_rank < 1 || true_rank > std::min(n, snapshots)) {
    throw ArgumentError("true rank " + std::to_string(true_rank) + " impossible for " +
                        std::to_string(n) + " dofs and " + std::to_string(snapshots) +
                        " snapshots");
  }
  if (!(noise_sigma >= 0.0)) throw ArgumentError("noise sigma must be nonnegative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Spatial modes as rows of `modes` (each length n), orthonormalized by two-pass MGS.
  std::vector<Vector> modes(true_rank, Vector(n));
  for (auto& m : modes) {
    for (double& v : m) v = gauss(rng);
  }
  for (std::size_t k = 0; k < true_rank; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t q = 0; q < k; ++q) simd::axpy(-simd::dot(modes[q], modes[k]), modes[q], modes[k]);
    }
    const double nn = linalg::norm2(modes[k]);
    for (double& v : modes[k]) v /= nn;
  }

  // Sinusoidal amplitudes with geometric energy decay and distinct frequencies.
  Matrix amp(true_rank, snapshots);
  for (std::size_t k = 0; k < true_rank; ++k) {
    const double energy = std::pow(0.8, static_cast<double>(k));
    const double freq = 0.45 * (static_cast<double>(k) + 0.5 + 0.3 * unif(rng)) /
                        static_cast<double>(true_rank + 1);
    const double phase = 2.0 * std::numbers::pi * unif(rng);
    for (std::size_t t = 0; t < snapshots; ++t) {
      amp(k, t) = energy * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(t) + phase);
    }
  }

  Matrix x(n, snapshots);
  for (std::size_t k = 0; k < true_rank; ++k) {
    for (std::size_t i = 0; i < n; ++i) simd::axpy(modes[k][i], amp.row(k), x.row(i));
  }
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (double& v : x.data()) v += noise(rng);
  }
  return pod::SnapshotMatrix(std::move(x), components);
}

}  // namespace sensorsel::experiments
