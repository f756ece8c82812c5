#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ploc/ploc_core.hpp"

namespace ploc::cli {

enum class Mode { Run, Analytic, Jitter, Salient, Readout };
enum class ReportFormat { Json, Csv };

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInputError = 2,
    kExitConfigError = 3,
    kExitContractViolation = 4,
};

struct RunConfig {
    Mode mode = Mode::Run;
    std::string input;
    std::string out = "ploc_out";
    ReportFormat report = ReportFormat::Json;

    NeighborhoodKind neighborhood = NeighborhoodKind::N4;
    int isis = 64;
    double duration = 0.0;  ///< > 0 switches run mode to wall-clock observation
    double rate_max = 10000.0;
    std::optional<double> rate_min;  ///< defaults to rate_max / 256
    double jitter = 0.0;
    std::uint64_t seed = 1;

    double theta_m = 0.1;
    double theta_corr = 0.3;
    int n_corr = 5;
    std::vector<int> features;  ///< empty: {7} in run mode, salient subset in salient mode

    // analytic
    double center_rate = 1.0;
    std::vector<std::optional<double>> neighbor_rates;
    bool brute_force = false;
    int grid_resolution = 64;
    int brute_isis = 8;

    // jitter
    std::vector<double> t2_sweep{0.02, 0.0001};
    std::vector<double> tj_sweep{0.001, 0.000003};
    std::uint64_t mc_isis = 1'000'000;
    int mc_isis_per_run = 8;

    // readout
    std::optional<double> scan_rate;  ///< cell visits per second; defaults to rate_max
    int accumulator_bits = 6;

    PlocConfig ploc_config() const;
    std::vector<int> effective_features() const;

    /// Checks every field against its module's constraints; throws ConfigError.
    void validate() const;
};

struct OutputFile {
    std::string name;
    std::uint64_t bytes = 0;
    std::string crc32;
};

struct RunReport {
    std::string mode;
    std::uint64_t cells = 0;
    std::uint64_t isis = 0;
    double wall_time_s = 0.0;
    std::vector<OutputFile> manifest;
    std::vector<std::string> warnings;
};

RunReport cmd_run(const RunConfig& cfg);
RunReport cmd_analytic(const RunConfig& cfg);
RunReport cmd_jitter(const RunConfig& cfg);
RunReport cmd_salient(const RunConfig& cfg);
RunReport cmd_readout(const RunConfig& cfg);

/// Validates, dispatches on cfg.mode and writes the report file.
RunReport execute(const RunConfig& cfg);

/// Full command line front end; returns the process exit status.
int main_entry(int argc, const char* const* argv);

}  // namespace ploc::cli
