#include <algorithm>
#include <string>

#include "sensorsel/selection.hpp"

namespace sensorsel::selection {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::ScalarGreedy: return "scalar-greedy";
    case Method::VectorGreedy: return "vector-greedy";
    case Method::Random: return "random";
    case Method::Convex: return "convex";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::ScalarGreedy, Method::VectorGreedy, Method::Random, Method::Convex}) {
    if (name == method_name(m)) return m;
  }
  return std::nullopt;
}

SensorSelection::SensorSelection(std::vector<std::size_t> locations, std::size_t components,
                                 std::size_t location_count, Method method)
    : locations_(std::move(locations)),
      components_(components),
      location_count_(location_count),
      method_(method) {
  if (components_ == 0) throw ArgumentError("selection needs at least one component");
  std::vector<bool> seen(location_count_, false);
  for (std::size_t loc : locations_) {
    if (loc >= location_count_) {
      throw ArgumentError("location " + std::to_string(loc) + " out of range for " +
                          std::to_string(location_count_) + " candidates");
    }
    if (seen[loc]) throw ArgumentError("location " + std::to_string(loc) + " selected twice");
    seen[loc] = true;
  }
}

std::vector<std::size_t> SensorSelection::rows_of(std::size_t location) const {
  std::vector<std::size_t> rows(components_);
  for (std::size_t j = 0; j < components_; ++j) rows[j] = location + location_count_ * j;
  return rows;
}

std::vector<std::size_t> SensorSelection::selected_rows() const {
  std::vector<std::size_t> rows;
  rows.reserve(locations_.size() * components_);
  for (std::size_t loc : locations_) {
    for (std::size_t j = 0; j < components_; ++j) rows.push_back(loc + location_count_ * j);
  }
  return rows;
}

SensorSelection as_vector_sensors(const SensorSelection& sel, std::size_t components) {
  SensorSelection out(sel.locations(), components, sel.location_count(), sel.method());
  out.gains = sel.gains;
  out.relaxation_objective = sel.relaxation_objective;
  return out;
}

}  // namespace sensorsel::selection
