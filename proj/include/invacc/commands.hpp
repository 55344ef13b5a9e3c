#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "invacc/config.hpp"
#include "invacc/units.hpp"

// Command layer behind the CLI. Each command validates its inputs, runs the
// corresponding pipeline and writes its output files; errors surface as the
// exceptions mapped to exit codes by run_cli.

namespace invacc {

enum class ReportUnits { bench, si };  // kPa/cm/mm-min vs strict SI in summaries

struct SimulateOptions {
    std::filesystem::path profile_path;
    std::filesystem::path out_path;
    std::optional<std::uint64_t> seed;  // overrides the profile seed
};

struct IdentifyOptions {
    std::vector<std::filesystem::path> trace_paths;
    std::optional<std::filesystem::path> out_path;  // machine-readable report
    std::optional<std::pair<double, double>> window;  // [m]
};

struct EnvelopeOptions {
    std::filesystem::path out_path;
    double p1_max_mag = units::atmosphere_pa;  // [Pa]
    double p2_max = 50.0e3;                    // [Pa]
    double rate = 100.0 * units::mm_per_min;   // [m/s]
    int samples = 41;
};

struct ClutchReportOptions {
    std::vector<double> p2_values;  // [Pa]
    double rate = 100.0 * units::mm_per_min;  // [m/s]
    double p1 = 0.0;  // optional simultaneous vacuum [Pa]
    std::optional<std::filesystem::path> out_path;
};

struct ClutchReportRow {
    double p2 = 0.0;             // [Pa]
    double peak = 0.0;           // [N]
    double peak_per_kpa = 0.0;   // [N/kPa]
    double elastic_slope = 0.0;  // [N/m]
};

void cmd_simulate(const SimulateOptions& opt, const Config& config, std::ostream& log,
                  ReportUnits units_mode);
FitResult cmd_identify(const IdentifyOptions& opt, const Config& config, std::ostream& log,
                       ReportUnits units_mode);
void cmd_envelope(const EnvelopeOptions& opt, const Config& config, std::ostream& log);
std::vector<ClutchReportRow> cmd_clutch(const ClutchReportOptions& opt, const Config& config,
                                        std::ostream& log);

// Full argv-level entry point; returns the process exit code
// (0 ok, 2 validation, 3 numerical, 4 I/O).
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // without argv[0]

}  // namespace invacc
