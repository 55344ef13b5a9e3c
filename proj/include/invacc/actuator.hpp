#pragma once

#include <cstddef>

// Contractile force model of the inverting-tube vacuum actuator.
//
// The tendon tension is the pressure term plus direction-dependent losses:
//
//     F = (1/2) * A_eff * |P1| + sign(xdot) * (F_yield + mu_visc * |xdot|)
//
// with xdot > 0 during forced extension. Losses resist relative motion, so
// the measured tension sits above the pressure baseline while the tendon is
// extracted and below it while it retracts.

namespace invacc {

struct ActuatorParams {
    double tube_diameter = 0.0;      // inverting-tube diameter [m]
    double effective_area = 0.0;     // effective cross section [m^2]
    double yield_force = 0.0;        // rate-independent deformation loss [N]
    double viscous_coeff = 0.0;      // rate-proportional loss [N per m/s]
    double reinforced_length = 0.0;  // reinforced-tube length [m]
    double stroke_max = 0.0;         // maximum tendon extension [m]

    void validate() const;
};

// Gauge pressures of the two chambers [Pa]. Vacuum magnitude is bounded by
// the ambient pressure.
struct Pressures {
    double retraction = 0.0;  // actuation chamber, negative when pulling
    double clutching = 0.0;   // clutch chamber, positive engages the clutch

    void validate() const;
};

struct KinematicSample {
    double extension = 0.0;  // tendon extension [m]
    double rate = 0.0;       // extension rate [m/s], positive = extension
};

struct TubeGeometry {
    double diameter = 0.0;  // [m]
    double area = 0.0;      // geometric cross section [m^2]
};

// Diameter and cross section from a flattened-tube measurement; the lay-flat
// width is half the circumference.
TubeGeometry tube_geometry(double layflat_width, double wall_thickness);

// Lossless tension at vacuum pressure p1 <= 0: half the pressure-area
// product, because the inverting tube doubles back like a movable pulley.
double ideal_force(double retraction_pressure, double tube_diameter);

// Pressure baseline (1/2)*A_eff*|P1| of the force model, losses excluded.
double baseline_force(double retraction_pressure, const ActuatorParams& params);

// Direction-dependent loss magnitude; zero at exactly zero rate.
double loss_force(double rate, const ActuatorParams& params);

// Full force model evaluated at one kinematic sample.
double actuator_force(const Pressures& pressures, const KinematicSample& sample,
                      const ActuatorParams& params);

// Lossless force ceiling at full sea-level vacuum, diameter in centimeters.
double max_force_atm(double diameter_cm);

// Fully contracted length of a device with the given extended length.
double contracted_length(double extended_length);

// Length change of the empty reinforced-tube portion for a tendon
// displacement; the tendon moves twice as far.
double empty_tube_delta(double tendon_delta);

}  // namespace invacc
