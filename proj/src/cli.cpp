#include "sensorsel/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "sensorsel/evaluate.hpp"
#include "sensorsel/experiments.hpp"
#include "sensorsel/io.hpp"
#include "sensorsel/linalg.hpp"
#include "sensorsel/pod.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel::cli {
namespace {

// Raised for a required-for-reproducibility option that the parser cannot enforce.
struct MissingOption : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the measurement matrix cannot be inverted.
struct SingularModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  bool header = false;
  bool no_center = false;
  std::optional<std::uint64_t> seed;
};

struct PodArgs {
  std::string input, modes, sigma, mean;
  std::size_t components = 1;
  std::size_t rank = 0;
};

struct SelectArgs {
  std::string modes, method, out;
  std::size_t components = 1;
  std::size_t sensors = 0;
  std::size_t component = 1;
};

struct ReconstructArgs {
  std::string modes, selection, observations, out, true_amplitudes;
};

struct BenchmarkArgs {
  std::string config, out, csv;
};

int cmd_pod(const GlobalOptions& g, const PodArgs& a, std::ostream& out) {
  const Matrix x = io::read_matrix_csv(a.input, g.header);
  const pod::SnapshotMatrix snaps(x, a.components);
  const pod::PodBasis basis = pod::compute_pod(
      snaps, a.rank, g.no_center ? pod::Centering::None : pod::Centering::Subtract);
  io::write_matrix_csv(a.modes, basis.modes);
  io::write_matrix_csv(a.sigma,
                       Matrix(basis.rank(), 1, Vector(basis.singular_values)));
  if (!a.mean.empty()) io::write_matrix_csv(a.mean, Matrix(basis.dofs(), 1, Vector(basis.mean)));
  out << "modes " << basis.dofs() << "x" << basis.rank() << " written to " << a.modes << '\n';
  return kOk;
}

int cmd_select(const GlobalOptions& g, const SelectArgs& a, std::ostream& out) {
  const auto method = selection::parse_method(a.method);
  if (!method) {
    throw ArgumentError("unknown method '" + a.method +
                        "' (expected vector-greedy, scalar-greedy, random or convex)");
  }
  if (*method == selection::Method::Random && !g.seed) {
    throw MissingOption("--seed is required for the random method");
  }
  const pod::PodBasis basis =
      pod::PodBasis::from_modes(io::read_matrix_csv(a.modes, g.header), a.components);
  const std::size_t s = basis.components;
  const std::size_t r = basis.rank();
  if (*method != selection::Method::Random && s * a.sensors > r) {
    throw ArgumentError("constraint s*p <= r violated: s=" + std::to_string(s) +
                        ", p=" + std::to_string(a.sensors) + ", r=" + std::to_string(r));
  }
  std::optional<selection::SensorSelection> sel;
  switch (*method) {
    case selection::Method::VectorGreedy:
      sel = selection::select_vector_greedy(basis, a.sensors);
      break;
    case selection::Method::ScalarGreedy:
      sel = selection::as_vector_sensors(
          selection::select_scalar_greedy(pod::component_block(basis, a.component), a.sensors), s);
      break;
    case selection::Method::Random:
      sel = selection::select_random(basis.locations(), a.sensors, *g.seed, s);
      break;
    case selection::Method::Convex:
      sel = selection::select_convex(basis, a.sensors);
      break;
  }
  io::write_selection_csv(a.out, *sel);
  out << sel->size() << " sensors selected by " << a.method << '\n';
  return kOk;
}

int cmd_reconstruct(const GlobalOptions& g, const ReconstructArgs& a, std::ostream& out) {
  const io::SelectionRecord rec = io::read_selection_csv(a.selection);
  const Matrix modes = io::read_matrix_csv(a.modes, g.header);
  const std::size_t s = rec.rows.front().size();
  const pod::PodBasis basis = pod::PodBasis::from_modes(modes, s);
  const selection::SensorSelection sel(rec.locations, s, basis.locations(),
                                       selection::Method::VectorGreedy);
  for (std::size_t k = 0; k < rec.locations.size(); ++k) {
    if (sel.rows_of(rec.locations[k]) != rec.rows[k]) {
      throw ArgumentError("row indices of sensor " + std::to_string(k + 1) +
                          " do not match a " + std::to_string(s) + "-component layout over " +
                          std::to_string(basis.dofs()) + " rows");
    }
  }
  const evaluate::MeasurementModel model = evaluate::build_model(basis, sel);
  const Matrix y = io::read_matrix_csv(a.observations, g.header);
  if (y.rows() != model.c.rows()) {
    throw ArgumentError("observations have " + std::to_string(y.rows()) + " rows, selection has " +
                        std::to_string(model.c.rows()) + " measured rows");
  }
  const evaluate::ReconstructionResult result = evaluate::reconstruct(model, y);
  if (result.rank_flag && model.c.is_square()) {
    const auto svd = linalg::thin_svd(model.c, model.c.rows());
    throw SingularModel("measurement matrix C is singular: numerical rank " +
                        std::to_string(result.rank) + " of " + std::to_string(model.c.rows()) +
                        ", sigma_min/sigma_max = " +
                        io::format_double(svd.singular_values.back() /
                                          svd.singular_values.front()));
  }
  io::write_matrix_csv(a.out, result.amplitudes);
  if (!a.true_amplitudes.empty()) {
    const Matrix truth = io::read_matrix_csv(a.true_amplitudes, g.header);
    out << io::format_double(evaluate::reconstruction_error(truth, result.amplitudes)) << '\n';
  }
  return kOk;
}

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out) {
  const io::BenchmarkConfig cfg = io::read_benchmark_config(a.config);
  experiments::ExperimentReport report;
  if (cfg.study == "random") {
    report = experiments::run_random_benchmark(cfg.experiment);
  } else {
    const auto& e = cfg.experiment;
    e.validate();
    const std::size_t max_r = *std::max_element(e.r_values.begin(), e.r_values.end());
    const std::size_t true_rank = cfg.true_rank == 0 ? max_r : cfg.true_rank;
    const auto data = experiments::generate_synthetic_flow(
        e.n_per_component, e.components, true_rank, cfg.snapshots, cfg.data_seed, 0.0);
    report = experiments::run_reconstruction_study(e, data);
  }
  {
    std::ofstream json(a.out, std::ios::binary | std::ios::trunc);
    if (!json) throw std::runtime_error("cannot open " + a.out + " for writing");
    json << io::report_to_json(report);
  }
  std::filesystem::path csv = a.csv;
  if (csv.empty()) csv = std::filesystem::path(a.out).replace_extension(".csv");
  {
    std::ofstream table(csv, std::ios::binary | std::ios::trunc);
    if (!table) throw std::runtime_error("cannot open " + csv.string() + " for writing");
    io::write_report_csv(table, report);
  }
  out << report.cells.size() << " cells written to " << a.out << " and " << csv.string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse vector-measurement sensor selection over POD bases", "sensorsel"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_flag("--header", g.header, "Input CSV files carry a header line");
  app.add_flag("--no-center", g.no_center, "Skip temporal mean subtraction in pod");
  app.add_option("--seed", g.seed, "Seed for randomized methods");

  PodArgs pod_args;
  auto* pod = app.add_subcommand("pod", "Truncated POD of a snapshot matrix");
  pod->add_option("-i,--input", pod_args.input, "Snapshot CSV (dofs x snapshots)")->required();
  pod->add_option("-s,--components", pod_args.components, "Vector components per location");
  pod->add_option("-r,--rank", pod_args.rank, "Number of modes")->required();
  pod->add_option("--modes", pod_args.modes, "Output modes CSV (n x r)")->required();
  pod->add_option("--sigma", pod_args.sigma, "Output singular values CSV (r x 1)")->required();
  pod->add_option("--mean", pod_args.mean, "Optional output temporal mean CSV (n x 1)");

  SelectArgs sel_args;
  auto* select = app.add_subcommand("select", "Choose sensor locations");
  select->add_option("--modes", sel_args.modes, "Modes CSV (n x r)")->required();
  select->add_option("-s,--components", sel_args.components, "Vector components per location");
  select->add_option("-p,--sensors", sel_args.sensors, "Number of sensor locations")->required();
  select->add_option("-m,--method", sel_args.method,
                     "vector-greedy | scalar-greedy | random | convex")
      ->required();
  select->add_option("--component", sel_args.component,
                     "Component block driving scalar-greedy (1-based)");
  select->add_option("-o,--out", sel_args.out, "Output selection CSV")->required();

  ReconstructArgs rec_args;
  auto* reconstruct = app.add_subcommand("reconstruct", "Least-squares mode amplitudes");
  reconstruct->add_option("--modes", rec_args.modes, "Modes CSV (n x r)")->required();
  reconstruct->add_option("--selection", rec_args.selection, "Selection CSV")->required();
  reconstruct->add_option("--observations", rec_args.observations,
                          "Observation CSV ((s*p) x N, rows in selection order)")
      ->required();
  reconstruct->add_option("-o,--out", rec_args.out, "Output amplitudes CSV (r x N)")->required();
  reconstruct->add_option("--true-amplitudes", rec_args.true_amplitudes,
                          "Reference amplitudes; prints the relative reconstruction error");

  BenchmarkArgs bench_args;
  auto* benchmark = app.add_subcommand("benchmark", "Seeded Monte Carlo comparison of methods");
  benchmark->add_option("-c,--config", bench_args.config, "key = value config file")->required();
  benchmark->add_option("-o,--out", bench_args.out, "Output JSON report")->required();
  benchmark->add_option("--csv", bench_args.csv, "Output CSV table (default: <out>.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::RequiredError& e) {
    // An unrecognized word where the subcommand belongs is a usage error, not a missing option.
    if (app.get_subcommands().empty() && !app.remaining().empty()) {
      err << "error: unknown command '" << app.remaining().front() << "'\n";
      return kParseError;
    }
    err << "error: " << e.what() << '\n';
    return kMissingOption;
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    if (*pod) return cmd_pod(g, pod_args, out);
    if (*select) return cmd_select(g, sel_args, out);
    if (*reconstruct) return cmd_reconstruct(g, rec_args, out);
    if (*benchmark) return cmd_benchmark(bench_args, out);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const MissingOption& e) {
    err << "error: " << e.what() << '\n';
    return kMissingOption;
  } catch (const ArgumentError& e) {
    err << "dimension error: " << e.what() << '\n';
    return kDimensionError;
  } catch (const SingularModel& e) {
    err << "singular: " << e.what() << '\n';
    return kSingular;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kSingular;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}

}  // namespace sensorsel::cli
