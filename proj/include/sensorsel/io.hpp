#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sensorsel/experiments.hpp"
#include "sensorsel/matrix.hpp"
#include "sensorsel/selection.hpp"

namespace sensorsel::io {

// Malformed input file; line and column are 1-based (column 0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Shortest text that reads back to the same double: 17 significant digits.
std::string format_double(double v);

Matrix parse_matrix_csv(std::istream& in, bool header, const std::string& source = "<stream>");
Matrix read_matrix_csv(const std::filesystem::path& path, bool header = false);
void write_matrix_csv(std::ostream& out, const Matrix& m, bool header = false);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m, bool header = false);

// rank,location,row_indices   e.g.  1,17,17;1017
struct SelectionRecord {
  std::vector<std::size_t> locations;
  std::vector<std::vector<std::size_t>> rows;
};
void write_selection_csv(std::ostream& out, const selection::SensorSelection& sel);
void write_selection_csv(const std::filesystem::path& path,
                         const selection::SensorSelection& sel);
SelectionRecord parse_selection_csv(std::istream& in, const std::string& source = "<stream>");
SelectionRecord read_selection_csv(const std::filesystem::path& path);

// Flat `key = value` document, '#' comments. Keys: study, n_per_component, s,
// r_values, trials, base_seed, methods, noise_sigma, threads, snapshots,
// true_rank, data_seed. Unknown keys raise ParseError naming the key.
struct BenchmarkConfig {
  std::string study = "random";  // random | reconstruction
  experiments::ExperimentConfig experiment;
  std::size_t snapshots = 200;
  std::size_t true_rank = 0;  // 0: max(r_values)
  std::uint64_t data_seed = 0;
};
BenchmarkConfig parse_benchmark_config(std::istream& in, const std::string& source = "<stream>");
BenchmarkConfig read_benchmark_config(const std::filesystem::path& path);

// JSON report; `include_wall_time` false gives a run-to-run comparable document.
std::string report_to_json(const experiments::ExperimentReport& report,
                           bool include_wall_time = true);
void write_report_csv(std::ostream& out, const experiments::ExperimentReport& report);

}  // namespace sensorsel::io
