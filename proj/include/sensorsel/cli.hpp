#pragma once

#include <iosfwd>

namespace sensorsel::cli {

// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kDimensionError = 3,
  kMissingOption = 4,
  kSingular = 5,
};

// Entry point of the `sensorsel` tool: pod | select | reconstruct | benchmark.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sensorsel::cli
