#include "invacc/trace.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "invacc/errors.hpp"
#include "invacc/units.hpp"

namespace invacc {

namespace {

double parse_cell(std::string_view cell, std::string_view origin, int lineno) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ValidationError(std::string(origin) + ":" + std::to_string(lineno) +
                              ": bad numeric cell '" + std::string(cell) + "'");
    }
    return v;
}

}  // namespace

void ForceTrace::validate() const {
    if (samples.empty()) throw ValidationError("trace has no samples");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].t > samples[i - 1].t)) {
            throw ValidationError("trace timestamps must be strictly increasing");
        }
    }
}

void write_trace_csv(const ForceTrace& trace, std::ostream& out) {
    for (const auto& [key, value] : trace.metadata) {
        out << "# " << key << " = " << value << "\n";
    }
    if (trace.rate_nominal != 0.0) {
        out << "# rate_nominal_m_s = " << units::format_double(trace.rate_nominal) << "\n";
    }
    out << trace_csv_header << "\n";
    for (const auto& s : trace.samples) {
        out << units::format_double(s.t) << ',' << units::format_double(s.x) << ','
            << units::format_double(s.xdot) << ',' << units::format_double(s.force) << ','
            << units::format_double(s.p1) << ',' << units::format_double(s.p2) << "\n";
    }
}

void write_trace_csv(const ForceTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_trace_csv(trace, out);
    out.flush();
    if (!out) throw IoError("failed writing trace to '" + path.string() + "'");
}

ForceTrace read_trace_csv(std::istream& in, std::string_view origin) {
    ForceTrace trace;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string body = line.substr(1);
            auto eq = body.find('=');
            if (eq != std::string::npos) {
                auto strip = [](std::string s) {
                    auto b = s.find_first_not_of(" \t");
                    auto e = s.find_last_not_of(" \t");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                std::string key = strip(body.substr(0, eq));
                std::string value = strip(body.substr(eq + 1));
                if (key == "rate_nominal_m_s") {
                    trace.rate_nominal = parse_cell(value, origin, lineno);
                } else if (!key.empty()) {
                    trace.metadata[key] = value;
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != trace_csv_header) {
                throw ValidationError(std::string(origin) + ":" + std::to_string(lineno) +
                                      ": unit-mismatched header '" + line + "', expected '" +
                                      std::string(trace_csv_header) + "'");
            }
            header_seen = true;
            continue;
        }
        std::array<double, 6> cells{};
        std::size_t pos = 0;
        for (int c = 0; c < 6; ++c) {
            auto comma = line.find(',', pos);
            bool last = (c == 5);
            if (last != (comma == std::string::npos)) {
                throw ValidationError(std::string(origin) + ":" + std::to_string(lineno) +
                                      ": expected 6 comma-separated columns");
            }
            auto len = last ? line.size() - pos : comma - pos;
            cells[static_cast<std::size_t>(c)] =
                parse_cell(std::string_view(line).substr(pos, len), origin, lineno);
            pos = last ? line.size() : comma + 1;
        }
        trace.samples.push_back({cells[0], cells[1], cells[2], cells[3], cells[4], cells[5]});
    }
    if (!header_seen) {
        throw ValidationError(std::string(origin) + ": missing trace header '" +
                              std::string(trace_csv_header) + "'");
    }
    trace.validate();
    return trace;
}

ForceTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace '" + path.string() + "'");
    return read_trace_csv(in, path.string());
}

}  // namespace invacc
