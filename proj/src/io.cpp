#include "sensorsel/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "json.hpp"

namespace sensorsel::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <class T>
bool parse_number(std::string_view text, T& value) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) +
                         (column > 0 ? ":" + std::to_string(column) : std::string()) + ": " +
                         message),
      line_(line),
      column_(column) {}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Matrix parse_matrix_csv(std::istream& in, bool header, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::vector<double> data;
  if (header) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(source, lineno, 0, "missing header line");
  }
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view, ',');
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw ParseError(source, lineno, 0,
                       "expected " + std::to_string(cols) + " fields, found " +
                           std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_number(fields[j], v) || !std::isfinite(v)) {
        throw ParseError(source, lineno, j + 1,
                         "field '" + std::string(trim(fields[j])) + "' is not a finite number");
      }
      data.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(source, lineno, 0, "no matrix rows");
  return Matrix(rows, cols, std::move(data));
}

Matrix read_matrix_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in = open_input(path);
  return parse_matrix_csv(in, header, path.string());
}

void write_matrix_csv(std::ostream& out, const Matrix& m, bool header) {
  if (header) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? ",c" : "c") << j;
    out << '\n';
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m, bool header) {
  std::ofstream out = open_output(path);
  write_matrix_csv(out, m, header);
}

void write_selection_csv(std::ostream& out, const selection::SensorSelection& sel) {
  out << "rank,location,row_indices\n";
  for (std::size_t k = 0; k < sel.size(); ++k) {
    const std::size_t loc = sel.locations()[k];
    out << (k + 1) << ',' << loc << ',';
    const auto rows = sel.rows_of(loc);
    for (std::size_t j = 0; j < rows.size(); ++j) out << (j ? ";" : "") << rows[j];
    out << '\n';
  }
}

void write_selection_csv(const std::filesystem::path& path,
                         const selection::SensorSelection& sel) {
  std::ofstream out = open_output(path);
  write_selection_csv(out, sel);
}

SelectionRecord parse_selection_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || trim(line) != "rank,location,row_indices") {
    throw ParseError(source, 1, 0, "expected header 'rank,location,row_indices'");
  }
  SelectionRecord rec;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view, ',');
    if (fields.size() != 3) {
      throw ParseError(source, lineno, 0,
                       "expected 3 fields, found " + std::to_string(fields.size()));
    }
    std::size_t rank = 0;
    std::size_t loc = 0;
    if (!parse_number(fields[0], rank)) throw ParseError(source, lineno, 1, "bad rank");
    if (rank != rec.locations.size() + 1) {
      throw ParseError(source, lineno, 1, "ranks must be consecutive from 1");
    }
    if (!parse_number(fields[1], loc)) throw ParseError(source, lineno, 2, "bad location");
    std::vector<std::size_t> rows;
    for (std::string_view part : split(fields[2], ';')) {
      std::size_t row = 0;
      if (!parse_number(part, row)) throw ParseError(source, lineno, 3, "bad row index");
      rows.push_back(row);
    }
    if (!rec.rows.empty() && rows.size() != rec.rows.front().size()) {
      throw ParseError(source, lineno, 3, "inconsistent component count");
    }
    for (std::size_t prev : rec.locations) {
      if (prev == loc) throw ParseError(source, lineno, 2, "duplicate location");
    }
    rec.locations.push_back(loc);
    rec.rows.push_back(std::move(rows));
  }
  if (rec.locations.empty()) throw ParseError(source, lineno, 0, "no sensors listed");
  return rec;
}

SelectionRecord read_selection_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_selection_csv(in, path.string());
}

BenchmarkConfig parse_benchmark_config(std::istream& in, const std::string& source) {
  BenchmarkConfig cfg;
  auto& e = cfg.experiment;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, lineno, 0, "expected key = value");
    const std::string key(trim(view.substr(0, eq)));
    const std::string_view value = trim(view.substr(eq + 1));
    auto bad = [&](const std::string& what) {
      return ParseError(source, lineno, 0, "invalid value for key '" + key + "': " + what);
    };
    auto count = [&](std::size_t& dst) {
      if (!parse_number(value, dst)) throw bad("expected a nonnegative integer");
    };
    if (key == "study") {
      if (value != "random" && value != "reconstruction") throw bad("random|reconstruction");
      cfg.study = std::string(value);
    } else if (key == "n_per_component") {
      count(e.n_per_component);
    } else if (key == "s") {
      count(e.components);
    } else if (key == "trials") {
      count(e.trials);
    } else if (key == "threads") {
      count(e.threads);
    } else if (key == "snapshots") {
      count(cfg.snapshots);
    } else if (key == "true_rank") {
      count(cfg.true_rank);
    } else if (key == "base_seed") {
      if (!parse_number(value, e.base_seed)) throw bad("expected an unsigned 64-bit integer");
    } else if (key == "data_seed") {
      if (!parse_number(value, cfg.data_seed)) throw bad("expected an unsigned 64-bit integer");
    } else if (key == "noise_sigma") {
      if (!parse_number(value, e.noise_sigma) || !(e.noise_sigma >= 0.0)) {
        throw bad("expected a nonnegative real");
      }
    } else if (key == "r_values") {
      e.r_values.clear();
      for (std::string_view part : split(value, ',')) {
        std::size_t r = 0;
        if (!parse_number(part, r)) throw bad("expected comma-separated integers");
        e.r_values.push_back(r);
      }
    } else if (key == "methods") {
      e.methods.clear();
      for (std::string_view part : split(value, ',')) {
        const auto m = experiments::parse_method_spec(trim(part));
        if (!m) throw bad("unknown method '" + std::string(trim(part)) + "'");
        e.methods.push_back(*m);
      }
    } else {
      throw ParseError(source, lineno, 0, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

BenchmarkConfig read_benchmark_config(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_benchmark_config(in, path.string());
}

std::string report_to_json(const experiments::ExperimentReport& report, bool include_wall_time) {
  using nlohmann::json;
  const auto& c = report.config;
  json methods = json::array();
  for (const auto& m : c.methods) methods.push_back(m.name());
  json doc;
  doc["schema"] = "sensorsel.experiment-report/1";
  doc["study"] = report.study;
  doc["config"] = {{"n_per_component", c.n_per_component}, {"s", c.components},
                   {"r_values", c.r_values},               {"trials", c.trials},
                   {"base_seed", c.base_seed},             {"methods", methods},
                   {"noise_sigma", c.noise_sigma}};
  doc["trial_seeds"] = report.trial_seeds;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json cells = json::array();
  for (const auto& cell : report.cells) {
    json values = json::array();
    for (const auto& v : cell.values) values.push_back(v ? num(*v) : json(nullptr));
    cells.push_back({{"method", cell.method},
                     {"r", cell.r},
                     {"p", cell.p},
                     {"mean", num(cell.mean)},
                     {"std", num(cell.stddev)},
                     {"trials", cell.trials},
                     {"skipped", cell.skipped},
                     {"values", std::move(values)}});
  }
  doc["cells"] = std::move(cells);
  if (include_wall_time) doc["wall_time_seconds"] = report.wall_time_seconds;
  return doc.dump(2) + "\n";
}

void write_report_csv(std::ostream& out, const experiments::ExperimentReport& report) {
  out << "method,r,p,mean,std,trials,skipped\n";
  for (const auto& cell : report.cells) {
    out << cell.method << ',' << cell.r << ',' << cell.p << ',' << format_double(cell.mean) << ','
        << format_double(cell.stddev) << ',' << cell.trials << ',' << cell.skipped << '\n';
  }
}

}  // namespace sensorsel::io
