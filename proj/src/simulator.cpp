#include "invacc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "invacc/errors.hpp"
#include "invacc/units.hpp"

namespace invacc {

namespace {

// Evaluates the quasi-static output force at a settled state. The actuator
// only contributes under vacuum; the clutch only while pressurized. A loose
// tendon transmits nothing.
double settled_force(const SimState& state, double rate, const DeviceParams& device) {
    if (state.slack > 0.0) return 0.0;
    double force = 0.0;
    if (state.pressures.retraction < 0.0) {
        force += actuator_force(state.pressures, KinematicSample{state.extension, rate},
                                device.actuator);
    }
    if (state.mode == Mode::clutched) {
        const auto slip = slip_threshold(state.pressures.clutching, device.clutch);
        force += clutch_force(state.clutch, state.extension, slip.force, device.clutch);
    }
    // The tendon can only pull.
    return std::max(0.0, force);
}

}  // namespace

Mode classify_mode(double p1, double p2) {
    if (p1 > 0.0) {
        throw ValidationError("classify_mode: positive tube pressure has no operating mode");
    }
    if (p2 > 0.0) return Mode::clutched;
    if (p1 < 0.0) return Mode::tension;
    return Mode::inactive;
}

StepResult step(const SimState& state, const Command& command, double dt,
                const DeviceParams& device) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("step: dt must be positive and finite");
    }
    if (!std::isfinite(command.rate) || !std::isfinite(command.p1) || !std::isfinite(command.p2)) {
        throw ValidationError("step: non-finite command");
    }
    const Mode mode = classify_mode(command.p1, command.p2);
    Pressures pressures{command.p1, command.p2};
    pressures.validate();

    SimState next = state;
    next.t = state.t + dt;
    next.mode = mode;
    next.pressures = pressures;
    if (mode == Mode::clutched) {
        if (!state.clutch.engaged) next.clutch = engage(state.t, state.extension);
    } else if (state.clutch.engaged) {
        next.clutch = disengage(state.clutch);
    }

    // Grip kinematics. The grip sits slack below the paid-out extension;
    // motion beyond either stroke end is absorbed by the end stop.
    const double stroke = device.actuator.stroke_max;
    const double x0 = state.extension;
    double grip = x0 - state.slack + command.rate * dt;
    bool clamped = false;
    if (grip < 0.0) {
        grip = 0.0;
        clamped = true;
    }

    double x1;
    if (command.p1 < 0.0) {
        x1 = grip;  // vacuum rewinds any slack and keeps the tendon taut
    } else if (grip >= x0) {
        x1 = grip;  // slack consumed, the grip drags the tube out
    } else if (mode == Mode::clutched) {
        // elastic recoil follows the grip down to the anchor, then goes loose
        x1 = std::max(grip, next.clutch.anchor_extension);
    } else {
        x1 = x0;  // nothing retracts the tube, the tendon goes loose
    }
    if (x1 > stroke) {
        x1 = stroke;
        grip = std::min(grip, stroke);
        clamped = true;
    }
    next.extension = x1;
    next.slack = std::max(0.0, x1 - grip);
    next.hit_end_stop = state.hit_end_stop || clamped;

    if (mode == Mode::clutched && x1 > x0) {
        const auto slip = slip_threshold(command.p2, device.clutch);
        next.clutch = advance_slip(next.clutch, x0, x1, slip.force, device.clutch);
    }
    const double realized_rate = (x1 - x0) / dt;
    return {next, settled_force(next, realized_rate, device)};
}

void Profile::validate() const {
    if (segments.empty()) throw ValidationError("profile: no segments");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("profile: dt must be positive");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw ValidationError("profile: noise sd must be non-negative");
    }
    for (const auto& seg : segments) {
        if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
            throw ValidationError("profile: segment duration must be positive");
        }
        if (!std::isfinite(seg.rate) || !std::isfinite(seg.p1) || !std::isfinite(seg.p2)) {
            throw ValidationError("profile: non-finite segment command");
        }
    }
}

ForceTrace run_profile(const Profile& profile, const DeviceParams& device) {
    profile.validate();
    device.actuator.validate();
    device.clutch.validate();

    GaussianSampler noise(profile.seed);
    ForceTrace trace;
    trace.metadata["dt_s"] = units::format_double(profile.dt);
    trace.metadata["noise_sd_N"] = units::format_double(profile.noise_sd);
    trace.metadata["seed"] = std::to_string(profile.seed);

    SimState state;
    {
        // Initial sample from rest under the first command, before any motion.
        const auto& first = profile.segments.front();
        state.mode = classify_mode(first.p1, first.p2);
        state.pressures = Pressures{first.p1, first.p2};
        state.pressures.validate();
        if (state.mode == Mode::clutched) state.clutch = engage(0.0, 0.0);
        const double f0 = settled_force(state, first.rate, device);
        trace.samples.push_back({0.0, 0.0, first.rate, f0 + noise(profile.noise_sd), first.p1,
                                 first.p2});
    }

    for (const auto& seg : profile.segments) {
        const auto steps = std::max<long long>(1, std::llround(seg.duration / profile.dt));
        const Command command{seg.rate, seg.p1, seg.p2};
        for (long long i = 0; i < steps; ++i) {
            const auto [next, force] = step(state, command, profile.dt, device);
            const double realized = (next.extension - state.extension) / profile.dt;
            state = next;
            trace.samples.push_back({state.t, state.extension, realized,
                                     force + noise(profile.noise_sd), seg.p1, seg.p2});
        }
    }
    if (state.hit_end_stop) trace.metadata["end_stop"] = "hit";
    return trace;
}

EnvelopeTable force_envelope(const DeviceParams& device, double p1_max_mag, double p2_max,
                             double rate, int samples_per_curve) {
    device.actuator.validate();
    device.clutch.validate();
    if (!(p1_max_mag >= 0.0) || p1_max_mag > units::atmosphere_pa) {
        throw ValidationError("force_envelope: vacuum range must be within one atmosphere");
    }
    if (!(p2_max >= 0.0)) throw ValidationError("force_envelope: clutch range must be non-negative");
    if (!(rate > 0.0)) throw ValidationError("force_envelope: rate must be positive");
    if (samples_per_curve < 2) throw ValidationError("force_envelope: need at least two samples");

    EnvelopeTable table;
    // A zero range degenerates to the single zero-pressure point.
    const int np1 = p1_max_mag > 0.0 ? samples_per_curve : 1;
    const int np2 = p2_max > 0.0 ? samples_per_curve : 1;
    const double loss = loss_force(rate, device.actuator);
    for (int i = 0; i < np1; ++i) {
        const double p1 = np1 == 1 ? 0.0
                                   : -p1_max_mag + static_cast<double>(i) * p1_max_mag / (np1 - 1);
        const double base = baseline_force(p1, device.actuator);
        // An unpowered device neither pulls nor resists; losses only act on a
        // pressurized tube.
        const double pull = p1 < 0.0 ? std::max(0.0, base - loss) : 0.0;
        const double resist = p1 < 0.0 ? base + loss : 0.0;
        table.retraction.pressure.push_back(p1);
        table.retraction.force.push_back(pull);
        table.extension.pressure.push_back(p1);
        table.extension.force.push_back(resist);
    }
    for (int i = 0; i < np2; ++i) {
        const double p2 = np2 == 1 ? 0.0 : static_cast<double>(i) * p2_max / (np2 - 1);
        const double limit = p2 > 0.0 ? slip_threshold(p2, device.clutch).force : 0.0;
        table.slip_limit.pressure.push_back(p2);
        table.slip_limit.force.push_back(limit);
    }
    return table;
}

ForceTrace synthesize_trace(double p1, double rate, const ActuatorParams& params, double noise_sd,
                            std::uint64_t seed, double window_lo, double window_hi,
                            int samples_per_pass) {
    params.validate();
    if (!(p1 < 0.0)) {
        throw ValidationError("synthesize_trace: needs a negative retraction pressure");
    }
    if (!(rate > 0.0)) throw ValidationError("synthesize_trace: rate must be positive");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw ValidationError("synthesize_trace: noise sd must be non-negative");
    }
    if (!(window_lo >= 0.0) || !(window_lo < window_hi) || window_hi > params.stroke_max) {
        throw ValidationError("synthesize_trace: window must lie inside the stroke");
    }
    if (samples_per_pass < 2) {
        throw ValidationError("synthesize_trace: need at least two samples per pass");
    }

    GaussianSampler noise(seed);
    const int n = samples_per_pass;
    const double dx = (window_hi - window_lo) / n;
    const double dt = dx / rate;
    const Pressures pressures{p1, 0.0};

    ForceTrace trace;
    trace.rate_nominal = rate;
    trace.metadata["p1_Pa"] = units::format_double(p1);
    trace.metadata["rate_m_s"] = units::format_double(rate);
    trace.metadata["noise_sd_N"] = units::format_double(noise_sd);
    trace.metadata["seed"] = std::to_string(seed);

    auto record = [&](int index, double x, double xdot) {
        x = std::clamp(x, window_lo, window_hi);
        const double f = actuator_force(pressures, KinematicSample{x, xdot}, params);
        trace.samples.push_back({index * dt, x, xdot, f + noise(noise_sd), p1, 0.0});
    };
    for (int i = 0; i <= n; ++i) record(i, window_lo + i * dx, rate);
    for (int i = 1; i <= n; ++i) record(n + i, window_hi - i * dx, -rate);
    return trace;
}

double GaussianSampler::unit_uniform() {
    // 53 uniform bits; matches the engine's specified output exactly.
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::operator()(double sd) {
    if (sd == 0.0) return 0.0;
    if (has_spare_) {
        has_spare_ = false;
        return sd * spare_;
    }
    double u1 = unit_uniform();
    while (u1 <= 0.0) u1 = unit_uniform();
    const double u2 = unit_uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(angle);
    has_spare_ = true;
    return sd * mag * std::cos(angle);
}

}  // namespace invacc
