#pragma once

// Run specification for one probe invocation, assembled from a flat `key = value` file and
// command-line flags (flags win).

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "speclab/analytic.hpp"
#include "speclab/asymptotics.hpp"

namespace speclab {

/// Invalid or incomplete run specification; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probe names accepted as subcommands (selftest excluded).
const std::vector<std::string>& probe_names();

/// Keys recognised in configuration files and as --flags.
const std::vector<std::string>& config_keys();

struct GridSpec {
  std::vector<double> values;
  /// Values are sphere degrees M, pinned to lambda_M.
  bool degrees = false;
};

/// "start:stop:step" or "v1,v2,...", optionally prefixed "deg:".
GridSpec parse_grid(std::string_view text);

struct RunConfig {
  std::string probe;
  Manifold manifold = Manifold::torus;
  int n = 2;
  std::optional<GridSpec> grid;
  std::optional<double> tau;
  std::optional<double> delta;
  std::optional<double> sigma;
  std::optional<LpExponent> r;
  std::optional<double> s;
  std::optional<MultiIndex> alpha;
  std::optional<MultiIndex> beta;
  std::optional<double> eps;
  std::optional<Family> family;
  std::vector<double> taus;
  std::vector<double> direction;
  std::filesystem::path out = "out";
  std::vector<std::string> formats = {"csv", "json", "svg"};
};

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are rejected.
KeyValues parse_config_text(std::string_view text);
KeyValues read_config_file(const std::filesystem::path& file);

/// Builds and validates the configuration for a probe. Entries of `flags` override `file`.
RunConfig make_run_config(const std::string& probe, const KeyValues& file, const KeyValues& flags);

/// Lambda grid for a lambda-indexed probe (explicit, pinned, or default).
std::vector<double> lambda_grid(const RunConfig& config);
/// Degree grid for a degree-indexed probe.
std::vector<int> degree_grid(const RunConfig& config);

}  // namespace speclab
