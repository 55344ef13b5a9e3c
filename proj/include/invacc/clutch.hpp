#pragma once

#include <filesystem>
#include <vector>

// Stick-slip clutch on the inverting tendon. While engaged the force is
// piecewise in the extension x:
//
//     0                          x <  anchor
//     k_tube * (x - anchor)      anchor <= x <= x_slip
//     F_slip                     x >= x_slip and extending
//
// where anchor is the largest extension with zero clutch force. It ratchets
// forward while the clutch slips and resets on (re-)engagement.

namespace invacc {

struct SlipPoint {
    double pressure = 0.0;  // clutching pressure [Pa]
    double force = 0.0;     // slip threshold [N]
};

struct ClutchParams {
    double tendon_stiffness = 0.0;        // linearized tendon stiffness [N/m]
    std::vector<SlipPoint> slip_curve;    // ordered by pressure
    double engage_threshold = 0.0;        // minimum positive pressure to engage [Pa]

    void validate() const;

    // Slip thresholds measured on the prototype, 10..50 kPa.
    static std::vector<SlipPoint> default_slip_curve();
};

struct ClutchState {
    bool engaged = false;
    double engage_time = 0.0;       // [s]
    double anchor_extension = 0.0;  // zero-force extension [m], monotone while engaged
    bool slipping = false;
};

struct SlipThreshold {
    double force = 0.0;        // [N]
    bool extrapolated = false; // pressure outside the tabulated range, clamped
};

// Monotone piecewise-linear interpolation of the slip curve. Clamps to the
// endpoints outside the tabulated range and flags the extrapolation.
// Requires an engaging pressure (> 0 and >= engage_threshold).
SlipThreshold slip_threshold(double clutch_pressure, const ClutchParams& params);

// Extension at which the clutch starts to slip.
double slip_extension(const ClutchState& state, double slip_force, const ClutchParams& params);

// Clutch tension at extension x. Saturates at the slip threshold, so a
// threshold lowered mid-slip takes effect immediately.
double clutch_force(const ClutchState& state, double extension, double slip_force,
                    const ClutchParams& params);

// Explicit-Euler slip step: the anchor advances by rate*dt while the slip
// condition (x >= x_slip, rate > 0) holds.
ClutchState update_clutch_state(const ClutchState& state, double extension, double rate,
                                double dt, double slip_force, const ClutchParams& params);

// Exact slip integration for a straight-line move x_start -> x_end within one
// simulation step: only the portion of travel beyond the slip boundary
// advances the anchor, which keeps the force continuous at the crossing.
ClutchState advance_slip(const ClutchState& state, double x_start, double x_end,
                         double slip_force, const ClutchParams& params);

ClutchState engage(double now, double extension);
ClutchState disengage(const ClutchState& state);

// Two-column text table: pressure [kPa], slip force [N]. '#' starts a comment.
std::vector<SlipPoint> load_slip_curve(const std::filesystem::path& path);

}  // namespace invacc
