#include "invacc/clutch.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "invacc/errors.hpp"
#include "invacc/units.hpp"

namespace invacc {

void ClutchParams::validate() const {
    if (!(tendon_stiffness > 0.0)) throw ValidationError("clutch: tendon stiffness must be positive");
    if (slip_curve.empty()) throw ValidationError("clutch: slip curve must have at least one point");
    if (engage_threshold < 0.0) throw ValidationError("clutch: engage threshold must be non-negative");
    for (std::size_t i = 0; i < slip_curve.size(); ++i) {
        if (!(slip_curve[i].force > 0.0)) {
            throw ValidationError("clutch: slip forces must be positive");
        }
        if (i > 0 && !(slip_curve[i].pressure > slip_curve[i - 1].pressure)) {
            throw ValidationError("clutch: slip curve pressures must be strictly increasing");
        }
    }
}

std::vector<SlipPoint> ClutchParams::default_slip_curve() {
    return {
        {10.0e3, 17.0}, {20.0e3, 35.0}, {30.0e3, 44.0}, {40.0e3, 83.0}, {50.0e3, 122.0},
    };
}

SlipThreshold slip_threshold(double clutch_pressure, const ClutchParams& params) {
    if (!(clutch_pressure > 0.0) || clutch_pressure < params.engage_threshold) {
        throw ValidationError("clutch not engaged: pressure " +
                              units::format_double(clutch_pressure / units::kilopascal) +
                              " kPa below the engagement threshold");
    }
    const auto& curve = params.slip_curve;
    if (clutch_pressure <= curve.front().pressure) {
        return {curve.front().force, clutch_pressure < curve.front().pressure};
    }
    if (clutch_pressure >= curve.back().pressure) {
        return {curve.back().force, clutch_pressure > curve.back().pressure};
    }
    auto hi = std::upper_bound(curve.begin(), curve.end(), clutch_pressure,
                               [](double p, const SlipPoint& pt) { return p < pt.pressure; });
    auto lo = hi - 1;
    const double w = (clutch_pressure - lo->pressure) / (hi->pressure - lo->pressure);
    return {lo->force + w * (hi->force - lo->force), false};
}

double slip_extension(const ClutchState& state, double slip_force, const ClutchParams& params) {
    if (!state.engaged) throw ValidationError("slip_extension: clutch is disengaged");
    return slip_force / params.tendon_stiffness + state.anchor_extension;
}

double clutch_force(const ClutchState& state, double extension, double slip_force,
                    const ClutchParams& params) {
    if (!state.engaged) throw ValidationError("clutch_force: clutch is disengaged");
    const double elastic = params.tendon_stiffness * (extension - state.anchor_extension);
    return std::clamp(elastic, 0.0, slip_force);
}

ClutchState update_clutch_state(const ClutchState& state, double extension, double rate,
                                double dt, double slip_force, const ClutchParams& params) {
    if (!state.engaged) throw ValidationError("update_clutch_state: clutch is disengaged");
    if (!(dt > 0.0)) throw ValidationError("update_clutch_state: dt must be positive");
    ClutchState next = state;
    next.slipping = extension >= slip_extension(state, slip_force, params) && rate > 0.0;
    if (next.slipping) next.anchor_extension += rate * dt;
    return next;
}

ClutchState advance_slip(const ClutchState& state, double x_start, double x_end,
                         double slip_force, const ClutchParams& params) {
    if (!state.engaged) throw ValidationError("advance_slip: clutch is disengaged");
    ClutchState next = state;
    next.slipping = false;
    if (x_end > x_start) {
        const double x_slip = slip_extension(state, slip_force, params);
        if (x_end > x_slip) {
            next.anchor_extension += x_end - std::max(x_start, x_slip);
            next.slipping = true;
        }
    }
    return next;
}

ClutchState engage(double now, double extension) {
    ClutchState state;
    state.engaged = true;
    state.engage_time = now;
    state.anchor_extension = extension;
    state.slipping = false;
    return state;
}

ClutchState disengage(const ClutchState& state) {
    ClutchState next = state;
    next.engaged = false;
    next.slipping = false;
    return next;
}

std::vector<SlipPoint> load_slip_curve(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open slip curve table '" + path.string() + "'");
    std::vector<SlipPoint> curve;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        double p_kpa = 0.0, force = 0.0;
        if (!(row >> p_kpa >> force)) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected two columns (P2 kPa, slip force N)");
        }
        std::string extra;
        if (row >> extra) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": trailing content '" + extra + "'");
        }
        const double pressure = p_kpa * units::kilopascal;
        if (!curve.empty() && !(pressure > curve.back().pressure)) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": slip curve pressures must be strictly increasing");
        }
        curve.push_back({pressure, force});
    }
    if (curve.empty()) throw ValidationError("slip curve table '" + path.string() + "' is empty");
    return curve;
}

}  // namespace invacc
