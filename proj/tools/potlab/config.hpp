#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace potlab::cli {

enum class Command { capacity, profile, check };

/// Every setting of one run; omitted keys keep these defaults.
struct RunConfig {
  Command command = Command::capacity;
  /// Built-in shape, "ball:R" or "ellipsoid:a,b,c"; ignored when mesh is set.
  std::string shape = "ball:1";
  int refine = 4;
  std::optional<std::filesystem::path> mesh;
  std::vector<double> t_grid;
  /// Adds the body surface t = 1 to the profile grid.
  bool with_boundary = false;
  std::vector<double> p;
  double q = 5.0;
  std::vector<std::string> suite;
  int resolution = 96;
  /// Fixed grid box x0,y0,z0,x1,y1,z1 for every level; empty for the
  /// automatic box.
  std::vector<double> box;
  /// Small-gradient cutoff relative to Cap / diam^2.
  double grad_cutoff = 1e-8;
  /// Newton tolerance on |u - t| / t.
  double level_tolerance = 1e-13;
  /// Monotonicity tolerance on U_p' relative to its positive-part scale.
  double delta = 0.01;
  /// Relative tolerance of the capacity against its reference.
  double cap_tolerance = 0.01;
  /// Level used for the flux capacity.
  double flux_level = 0.5;
  std::filesystem::path out = "potlab-out";
  std::uint64_t seed = 1;
};

/// Thrown for a rejected configuration; maps to exit status 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of parsing: either a config to run or an immediate exit.
struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = 0;
};

/// Parses argv (with an optional --config file); prints help and parse
/// errors to the given streams.
[[nodiscard]] ParseResult parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                             std::ostream& err);

/// Range checks; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace potlab::cli
