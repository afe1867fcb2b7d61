#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaussint/param_table.hpp"

namespace gaussint::harness {

enum ExitCode { kSuccess = 0, kCheckFailed = 1, kUsageError = 2 };

/// Subcommands that take an experiment config (everything except plotdata).
const std::vector<std::string>& config_subcommands();

/// Named parameter sets: "desk" (grid 4096, reps 2000, eps 1e-3) and "smoke"
/// (grid 256, reps 64, eps 1e-2). Each preset is complete for its subcommand.
/// Throws ConfigError for an unknown name.
ParamTable preset(const std::string& subcommand, const std::string& name);

struct ConfigSources {
    std::optional<std::string> preset;
    std::optional<std::string> config_path;
    std::vector<std::pair<std::string, std::string>> overrides;  // flags and --set, in order
    std::optional<unsigned long long> seed;
};

/// preset < config file < overrides < --seed. The seed defaults to 42.
ParamTable resolve_config(const std::string& subcommand, const ConfigSources& sources);

struct RunResult {
    int exit_code = kSuccess;
    std::string csv;  // complete output, written by the caller only when exit_code < 2
    std::string log;  // human-readable summaries for stderr
};

/// Runs a config subcommand. Every key of `config` must be consumed before any
/// work starts; ConfigError and std::invalid_argument propagate to the caller.
RunResult run(const std::string& subcommand, const ParamTable& config);

/// First CSV line: "# gaussint <version> <subcommand> seed=<s> config=<fnv1a of serialize()>".
std::string provenance_line(const std::string& subcommand, const ParamTable& config);

struct PlotFile {
    std::string path;
    std::string content;  // "x y err" lines
};

/// Splits a harness CSV into one file per series, named <stem>_<ycol>.dat in
/// `out_dir`. x is n, ln(a_norm) or t; series are exact_value, exact, mc_mean,
/// x1, x2 with their error columns. Zero-byte input gives no files; a header
/// without rows gives empty files. Throws ConfigError for missing columns.
std::vector<PlotFile> plot_series(const std::string& csv_text, const std::string& stem, const std::string& out_dir);

/// Full command line: parses argv, runs, writes output. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaussint::harness
