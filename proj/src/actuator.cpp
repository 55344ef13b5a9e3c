#include "invacc/actuator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "invacc/errors.hpp"
#include "invacc/units.hpp"

namespace invacc {

namespace {
constexpr double pi = std::numbers::pi;

double circle_area(double diameter) { return pi * diameter * diameter / 4.0; }
}  // namespace

void ActuatorParams::validate() const {
    if (!(tube_diameter > 0.0)) throw ValidationError("actuator: tube diameter must be positive");
    if (!(effective_area > 0.0)) throw ValidationError("actuator: effective area must be positive");
    if (effective_area > circle_area(tube_diameter)) {
        throw ValidationError("actuator: effective area exceeds the geometric cross section");
    }
    if (yield_force < 0.0) throw ValidationError("actuator: yield force must be non-negative");
    if (viscous_coeff < 0.0) throw ValidationError("actuator: viscous coefficient must be non-negative");
    if (!(reinforced_length > 0.0)) throw ValidationError("actuator: reinforced length must be positive");
    if (!(stroke_max > 0.0)) throw ValidationError("actuator: stroke must be positive");
    // The fully contracted reinforced tube holds twice its length in tendon.
    if (stroke_max > 2.0 * reinforced_length) {
        throw ValidationError("actuator: stroke exceeds twice the reinforced length");
    }
}

void Pressures::validate() const {
    if (retraction < -units::atmosphere_pa || clutching < -units::atmosphere_pa) {
        throw ValidationError("gauge vacuum cannot exceed the ambient pressure magnitude");
    }
}

TubeGeometry tube_geometry(double layflat_width, double wall_thickness) {
    if (!(layflat_width > 0.0)) {
        throw ValidationError("tube_geometry: lay-flat width must be positive");
    }
    if (wall_thickness < 0.0) {
        throw ValidationError("tube_geometry: wall thickness must be non-negative");
    }
    // The lay-flat width is half the circumference.
    const double diameter = 2.0 * layflat_width / pi;
    if (2.0 * wall_thickness >= diameter) {
        throw ValidationError("tube_geometry: wall thickness incompatible with diameter");
    }
    return {diameter, circle_area(diameter)};
}

double ideal_force(double retraction_pressure, double tube_diameter) {
    if (!(tube_diameter > 0.0)) throw ValidationError("ideal_force: diameter must be positive");
    if (retraction_pressure > 0.0) {
        throw ValidationError("ideal_force: positive retraction pressure is outside the model");
    }
    return -0.5 * circle_area(tube_diameter) * retraction_pressure;
}

double baseline_force(double retraction_pressure, const ActuatorParams& params) {
    if (retraction_pressure > 0.0) {
        throw ValidationError("baseline_force: positive retraction pressure is outside the model");
    }
    return -0.5 * params.effective_area * retraction_pressure;
}

double loss_force(double rate, const ActuatorParams& params) {
    if (rate == 0.0) return 0.0;
    return params.yield_force + params.viscous_coeff * std::abs(rate);
}

double actuator_force(const Pressures& pressures, const KinematicSample& sample,
                      const ActuatorParams& params) {
    pressures.validate();
    if (sample.extension < 0.0 || sample.extension > params.stroke_max) {
        throw ValidationError("actuator_force: extension " +
                              units::format_double(sample.extension) + " m outside the stroke");
    }
    const double sign = (sample.rate > 0.0) ? 1.0 : (sample.rate < 0.0 ? -1.0 : 0.0);
    return baseline_force(pressures.retraction, params) + sign * loss_force(sample.rate, params);
}

double max_force_atm(double diameter_cm) {
    if (!(diameter_cm > 0.0)) throw ValidationError("max_force_atm: diameter must be positive");
    return 3.98 * diameter_cm * diameter_cm;
}

double contracted_length(double extended_length) {
    if (!(extended_length > 0.0)) {
        throw ValidationError("contracted_length: extended length must be positive");
    }
    return extended_length / 3.0;
}

double empty_tube_delta(double tendon_delta) { return tendon_delta / 2.0; }

}  // namespace invacc
