#include "invacc/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "invacc/errors.hpp"
#include "invacc/units.hpp"

namespace invacc {

namespace {

using units::Dimension;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

struct Line {
    int number = 0;
    std::string key;
    std::string value;
};

// key = value lines; blank lines and full-line '#' comments skipped.
std::vector<Line> parse_lines(std::string_view text, std::string_view origin) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = eol == std::string_view::npos ? text.substr(pos)
                                                             : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++number;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError(std::string(origin) + ":" + std::to_string(number) +
                                  ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ValidationError(std::string(origin) + ":" + std::to_string(number) +
                                  ": empty key or value");
        }
        lines.push_back({number, std::string(key), std::string(value)});
    }
    return lines;
}

std::string location(std::string_view origin, int line) {
    return std::string(origin) + ":" + std::to_string(line);
}

// Non-negative integer out of a scalar quantity.
std::uint64_t parse_integer(const std::string& value, std::string_view context) {
    const double v = units::parse_quantity(value, Dimension::scalar, context);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15) {
        throw ValidationError(std::string(context) + ": expected a non-negative integer");
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_commas(std::string_view value) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto comma = value.find(',', pos);
        const auto part = trim(comma == std::string_view::npos ? value.substr(pos)
                                                               : value.substr(pos, comma - pos));
        parts.emplace_back(part);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return parts;
}

// Prototype device values. default_config() parses this very text, so the
// written file and the built-in defaults cannot drift apart.
constexpr std::string_view default_config_text = R"(# InVACC device and analysis configuration.
# Every value carries an explicit unit; unknown keys are rejected.

tube_diameter      = 1.8462 cm
effective_area     = 2.49 cm^2
yield_force        = 2.45 N
viscous_coeff      = 9.70 N.s/m
reinforced_length  = 28 cm
stroke_max         = 55 cm

tendon_stiffness   = 2857.142857 N/m
engage_threshold   = 0 kPa
# slip_curve = <path to a two-column pressure [kPa] / force [N] table>
# (the built-in prototype slip curve applies when the key is absent)

tendon_area            = 3.7 mm^2
tendon_yield_force     = 60 N
tendon_yield_strain    = 7 %
tendon_ultimate_force  = 120 N
tendon_ultimate_strain = 33 %
tendon_free_length     = 30 cm

window_lo        = 5 cm
window_hi        = 50 cm
settling_margin  = 1 cm
smoothing_window = 5 -
dt               = 1 ms
noise_sd         = 0 N
seed             = 1 -
)";

}  // namespace

void Config::validate() const {
    actuator.validate();
    clutch.validate();
    material.validate();
    if (!(tendon_free_length > 0.0)) {
        throw ValidationError("config: tendon free length must be positive");
    }
    if (!(analysis.window_lo >= 0.0) || !(analysis.window_lo < analysis.window_hi)) {
        throw ValidationError("config: analysis window must satisfy 0 <= lo < hi");
    }
    if (analysis.window_hi > actuator.stroke_max) {
        throw ValidationError("config: analysis window extends past the stroke");
    }
    if (analysis.settling_margin < 0.0) {
        throw ValidationError("config: settling margin must be non-negative");
    }
    if (analysis.smoothing_window < 1 || analysis.smoothing_window % 2 == 0) {
        throw ValidationError("config: smoothing window must be odd and at least 1");
    }
    if (!(sim.dt > 0.0)) throw ValidationError("config: dt must be positive");
    if (sim.noise_sd < 0.0) throw ValidationError("config: noise sd must be non-negative");
}

Config parse_config_text(std::string_view text, std::string_view origin) {
    Config config;
    config.clutch.slip_curve = ClutchParams::default_slip_curve();

    struct KeySpec {
        Dimension dim;
        std::function<void(Config&, double)> set;
    };
    static const std::map<std::string, KeySpec, std::less<>> keys = {
        {"tube_diameter", {Dimension::length, [](Config& c, double v) { c.actuator.tube_diameter = v; }}},
        {"effective_area", {Dimension::area, [](Config& c, double v) { c.actuator.effective_area = v; }}},
        {"yield_force", {Dimension::force, [](Config& c, double v) { c.actuator.yield_force = v; }}},
        {"viscous_coeff", {Dimension::viscous_coeff, [](Config& c, double v) { c.actuator.viscous_coeff = v; }}},
        {"reinforced_length", {Dimension::length, [](Config& c, double v) { c.actuator.reinforced_length = v; }}},
        {"stroke_max", {Dimension::length, [](Config& c, double v) { c.actuator.stroke_max = v; }}},
        {"tendon_stiffness", {Dimension::stiffness, [](Config& c, double v) { c.clutch.tendon_stiffness = v; }}},
        {"engage_threshold", {Dimension::pressure, [](Config& c, double v) { c.clutch.engage_threshold = v; }}},
        {"tendon_area", {Dimension::area, [](Config& c, double v) { c.material.area = v; }}},
        {"tendon_yield_force", {Dimension::force, [](Config& c, double v) { c.material.yield_force = v; }}},
        {"tendon_yield_strain", {Dimension::scalar, [](Config& c, double v) { c.material.yield_strain = v; }}},
        {"tendon_ultimate_force", {Dimension::force, [](Config& c, double v) { c.material.ultimate_force = v; }}},
        {"tendon_ultimate_strain", {Dimension::scalar, [](Config& c, double v) { c.material.ultimate_strain = v; }}},
        {"tendon_free_length", {Dimension::length, [](Config& c, double v) { c.tendon_free_length = v; }}},
        {"window_lo", {Dimension::length, [](Config& c, double v) { c.analysis.window_lo = v; }}},
        {"window_hi", {Dimension::length, [](Config& c, double v) { c.analysis.window_hi = v; }}},
        {"settling_margin", {Dimension::length, [](Config& c, double v) { c.analysis.settling_margin = v; }}},
        {"dt", {Dimension::time, [](Config& c, double v) { c.sim.dt = v; }}},
        {"noise_sd", {Dimension::force, [](Config& c, double v) { c.sim.noise_sd = v; }}},
    };

    std::set<std::string> seen;
    for (const auto& line : parse_lines(text, origin)) {
        if (!seen.insert(line.key).second) {
            throw ValidationError(location(origin, line.number) + ": duplicate key '" +
                                  line.key + "'");
        }
        try {
            if (line.key == "slip_curve") {
                std::filesystem::path curve_path(line.value);
                if (curve_path.is_relative() && origin.find('<') == std::string_view::npos) {
                    // relative to the config file, like an include
                    const auto beside = std::filesystem::path(origin).parent_path() / curve_path;
                    std::error_code ec;
                    if (std::filesystem::exists(beside, ec)) curve_path = beside;
                }
                config.clutch.slip_curve = load_slip_curve(curve_path);
            } else if (line.key == "smoothing_window") {
                config.analysis.smoothing_window =
                    static_cast<int>(parse_integer(line.value, line.key));
            } else if (line.key == "seed") {
                config.sim.seed = parse_integer(line.value, line.key);
            } else if (const auto it = keys.find(line.key); it != keys.end()) {
                it->second.set(config, units::parse_quantity(line.value, it->second.dim, line.key));
            } else {
                throw ValidationError("unknown key '" + line.key + "'");
            }
        } catch (const IoError&) {
            throw;
        } catch (const std::runtime_error& err) {
            throw ValidationError(location(origin, line.number) + ": " + err.what());
        }
    }

    for (const auto& [key, spec] : keys) {
        if (!seen.count(key)) {
            throw ValidationError(std::string(origin) + ": missing key '" + key + "'");
        }
    }
    for (const char* key : {"smoothing_window", "seed"}) {
        if (!seen.count(key)) {
            throw ValidationError(std::string(origin) + ": missing key '" + std::string(key) + "'");
        }
    }
    config.validate();
    return config;
}

Config load_config(const std::filesystem::path& path) {
    const auto resolved = resolve_config_path(path);
    std::ifstream in(resolved);
    if (!in) throw IoError("cannot open config file " + resolved.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), resolved.string());
}

Config default_config() { return parse_config_text(default_config_text, "<defaults>"); }

void write_default_config(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << default_config_text;
    if (!out.flush()) throw IoError("failed writing " + path.string());
}

std::filesystem::path resolve_config_path(const std::filesystem::path& path) {
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) return path;
    if (path.is_absolute()) return path;
    if (const char* env = std::getenv("INVACC_CONFIG_PATH")) {
        std::string_view dirs(env);
        std::size_t pos = 0;
        while (pos <= dirs.size()) {
            const auto colon = dirs.find(':', pos);
            const auto dir = colon == std::string_view::npos ? dirs.substr(pos)
                                                             : dirs.substr(pos, colon - pos);
            pos = colon == std::string_view::npos ? dirs.size() + 1 : colon + 1;
            if (dir.empty()) continue;
            const auto candidate = std::filesystem::path(dir) / path;
            if (std::filesystem::exists(candidate, ec)) return candidate;
        }
    }
    return path;
}

Profile load_profile(const std::filesystem::path& path, const SimDefaults& defaults) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string origin = path.string();

    Profile profile;
    profile.dt = defaults.dt;
    profile.noise_sd = defaults.noise_sd;
    profile.seed = defaults.seed;

    std::set<std::string> seen;
    for (const auto& line : parse_lines(buffer.str(), origin)) {
        try {
            if (line.key == "segment") {
                const auto parts = split_commas(line.value);
                if (parts.size() != 4) {
                    throw ValidationError("segment needs 'duration, rate, P1, P2'");
                }
                ProfileSegment seg;
                seg.duration = units::parse_quantity(parts[0], Dimension::time, "duration");
                seg.rate = units::parse_quantity(parts[1], Dimension::velocity, "rate");
                seg.p1 = units::parse_quantity(parts[2], Dimension::pressure, "P1");
                seg.p2 = units::parse_quantity(parts[3], Dimension::pressure, "P2");
                profile.segments.push_back(seg);
                continue;
            }
            if (!seen.insert(line.key).second) {
                throw ValidationError("duplicate key '" + line.key + "'");
            }
            if (line.key == "dt") {
                profile.dt = units::parse_quantity(line.value, Dimension::time, "dt");
            } else if (line.key == "noise_sd") {
                profile.noise_sd = units::parse_quantity(line.value, Dimension::force, "noise_sd");
            } else if (line.key == "seed") {
                profile.seed = parse_integer(line.value, "seed");
            } else {
                throw ValidationError("unknown key '" + line.key + "'");
            }
        } catch (const std::runtime_error& err) {
            throw ValidationError(location(origin, line.number) + ": " + err.what());
        }
    }
    profile.validate();
    return profile;
}

}  // namespace invacc
