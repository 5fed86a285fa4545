#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace scy::cli {

enum ExitCode : int {
    kOk = 0,
    kSymbolicFailure = 2,
    kNumericalFlag = 3,
    kConfigError = 64,
    kMissingInput = 66,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    int dim = 2;
    int n = 16;
    std::string family = "single-mode";
    std::vector<double> amplitudes;  // empty means the command's default
    std::uint64_t seed = 0;
    int modes = 2;
    double tol = 1e-11;
    double krylov_tol = 1e-13;
    int max_newton = 30;
    int threads = 1;
    std::string out = "scy_out";
    std::string mutate;
};

/// Recognized keys, shared by the config file and the flags.
const std::vector<std::string>& config_keys();

/// Reads `key = value` lines; `#` starts a comment. Unknown keys and repeated
/// keys throw ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds a validated RunConfig from raw key/value pairs. Throws ConfigError.
RunConfig make_config(const std::map<std::string, std::string>& kv);

/// Comma-separated doubles, parsed independently of the locale.
std::vector<double> parse_amplitudes(const std::string& text);

int run_verify(const RunConfig& cfg);
int run_solve(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);

/// Fixed-format summary of verify.json and every *.csv in `dir`, in name
/// order. Throws std::runtime_error when there is nothing to report.
std::string emit_report(const std::string& dir);
int run_check(const RunConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace scy::cli
