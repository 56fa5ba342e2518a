#pragma once

// Command-line front end: subcommand dispatch, output files, and the self-test suite.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "speclab/asymptotics.hpp"
#include "speclab/run_config.hpp"

namespace speclab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;

/// Executes the probe named by the configuration.
ProbeResult run_probe(const RunConfig& config);

/// Writes the requested formats as `<probe>_<stamp>.<ext>` plus `summary.json` into config.out.
std::vector<std::filesystem::path> write_outputs(const ProbeResult& result, const RunConfig& config,
                                                 const std::string& stamp);

/// UTC timestamp "YYYYMMDDTHHMMSSZ".
std::string timestamp_now();

/// Runs the invariant suite, printing one PASS/FAIL line per check, and writes the CSV/JSON
/// tables of a fixed probe set into out_dir. Returns the number of failed checks.
int run_selftest(const std::filesystem::path& out_dir, std::ostream& out);

/// args excludes the program name. Returns the process exit status.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace speclab
