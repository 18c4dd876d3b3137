#include <numeric>
#include <random>
#include <string>

#include "sensorsel/selection.hpp"

namespace sensorsel::selection {

SensorSelection select_random(std::size_t location_count, std::size_t p, std::uint64_t seed,
                              std::size_t components) {
  if (p < 1 || p > location_count) {
    throw ArgumentError("cannot draw " + std::to_string(p) + " sensors from " +
                        std::to_string(location_count) + " locations");
  }
  // Partial Fisher-Yates; draw order is the selection order.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(location_count);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < p; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, location_count - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(p);
  return SensorSelection(std::move(pool), components, location_count, Method::Random);
}

}  // namespace sensorsel::selection
