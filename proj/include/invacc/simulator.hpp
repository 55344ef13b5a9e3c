#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "invacc/actuator.hpp"
#include "invacc/clutch.hpp"
#include "invacc/sysid.hpp"
#include "invacc/trace.hpp"

// Quasi-static simulation of the combined actuator/clutch under commanded
// extension rates and pressure schedules. Pressures take their commanded
// values instantly; there is no tendon inertia. Exactly one operating mode
// holds at every step:
//
//   inactive   P1 = 0, no clutch pressure; the device never pulls back, a
//              retracting grip accumulates slack and the output force is zero
//   tension    P1 < 0, P2 <= 0; tendon tension follows the actuator model
//   clutched   P2 > 0; clutch force is added on top of any vacuum tension

namespace invacc {

enum class Mode { inactive, tension, clutched };

struct SimState {
    double t = 0.0;
    double extension = 0.0;  // [m], always within [0, stroke_max]
    double slack = 0.0;      // loose tendon length between grip and device [m]
    Mode mode = Mode::inactive;
    Pressures pressures;
    ClutchState clutch;
    bool hit_end_stop = false;  // sticky: some step was clamped at a stroke end
};

struct Command {
    double rate = 0.0;  // commanded grip rate [m/s], positive = extension
    double p1 = 0.0;    // [Pa]
    double p2 = 0.0;    // [Pa]
};

struct DeviceParams {
    ActuatorParams actuator;
    ClutchParams clutch;
};

struct StepResult {
    SimState state;
    double force = 0.0;  // output tension [N]
};

Mode classify_mode(double p1, double p2);

// Advances one step: mode transition, slack bookkeeping, motion clamped to
// the stroke, then force evaluation. Slip-boundary crossings are resolved
// within the step so the clutch force stays continuous.
StepResult step(const SimState& state, const Command& command, double dt,
                const DeviceParams& device);

struct ProfileSegment {
    double duration = 0.0;  // [s]
    double rate = 0.0;      // [m/s]
    double p1 = 0.0;        // [Pa]
    double p2 = 0.0;        // [Pa]
};

struct Profile {
    std::vector<ProfileSegment> segments;
    double dt = 1.0e-3;      // [s]
    double noise_sd = 0.0;   // additive Gaussian force noise [N]
    std::uint64_t seed = 0;

    void validate() const;
};

// Runs a commanded profile from the fully retracted rest state and records
// the trace. Deterministic for a given seed.
ForceTrace run_profile(const Profile& profile, const DeviceParams& device);

struct EnvelopeCurve {
    std::vector<double> pressure;  // [Pa]
    std::vector<double> force;     // [N]
};

// Force capability: retraction and extension-resistance tension over the
// vacuum range, and the clutch slip limit over the clutching range.
struct EnvelopeTable {
    EnvelopeCurve retraction;  // vs P1 in [-p1_max_mag, 0]
    EnvelopeCurve extension;   // vs P1 in [-p1_max_mag, 0]
    EnvelopeCurve slip_limit;  // vs P2 in [0, p2_max]
};

EnvelopeTable force_envelope(const DeviceParams& device, double p1_max_mag, double p2_max,
                             double rate, int samples_per_curve = 41);

// One full extension/contraction pass over the analysis window with additive
// Gaussian noise; fixture generator for identification round trips.
ForceTrace synthesize_trace(double p1, double rate, const ActuatorParams& params,
                            double noise_sd, std::uint64_t seed,
                            double window_lo = 0.05, double window_hi = 0.50,
                            int samples_per_pass = 2000);

// Seeded Gaussian sampler: Box-Muller over std::mt19937_64. The engine
// output is fully specified by the standard; the library normal distribution
// is not, so the transform is pinned here to keep traces reproducible byte
// for byte.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double operator()(double sd);

  private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;

    double unit_uniform();  // in [0, 1)
};

}  // namespace invacc
