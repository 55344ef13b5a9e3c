#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace invacc {

struct TraceSample {
    double t = 0.0;      // [s]
    double x = 0.0;      // tendon extension [m]
    double xdot = 0.0;   // extension rate [m/s]
    double force = 0.0;  // measured tension [N]
    double p1 = 0.0;     // retraction pressure [Pa]
    double p2 = 0.0;     // clutching pressure [Pa]
};

// Timestamped force-extension record, the exchange format between the
// simulator and the identification pipeline.
struct ForceTrace {
    std::vector<TraceSample> samples;
    double rate_nominal = 0.0;  // commanded rate magnitude [m/s], 0 if unknown
    std::map<std::string, std::string> metadata;

    void validate() const;  // non-empty, strictly increasing t
};

// Fixed CSV column set; values are SI with '.' decimal point and LF endings.
inline constexpr std::string_view trace_csv_header = "t_s,x_m,xdot_m_s,F_N,P1_Pa,P2_Pa";

// Metadata is carried in leading "# key = value" comment lines. Numbers are
// written with shortest round-trip precision, so write/read is lossless.
void write_trace_csv(const ForceTrace& trace, std::ostream& out);
void write_trace_csv(const ForceTrace& trace, const std::filesystem::path& path);

ForceTrace read_trace_csv(std::istream& in, std::string_view origin = "<stream>");
ForceTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace invacc
