#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "invacc/trace.hpp"

// Coefficient identification from force-extension traces: segment by motion
// direction, average forces over the analysis window, split the averages into
// a pressure baseline and a hysteresis loss, then fit the force model by
// ordinary least squares across operating conditions.

namespace invacc {

enum class Direction { extension, contraction };

struct AnalysisOptions {
    double window_lo = 0.05;        // analysis window in extension [m]
    double window_hi = 0.50;
    double settling_margin = 0.01;  // travel discarded after each reversal [m]
    int smoothing_window = 5;       // moving-average width for the derived velocity, odd
};

struct SegmentSample {
    double t = 0.0;
    double x = 0.0;
    double xdot = 0.0;   // finite-difference velocity [m/s]
    double force = 0.0;
    double p1 = 0.0;
};

struct TraceSegment {
    Direction direction = Direction::extension;
    std::vector<SegmentSample> samples;  // in-window, settled
};

struct DirectionStats {
    Direction direction = Direction::extension;
    double mean = 0.0;  // [N]
    double sd = 0.0;    // [N]
    std::size_t count = 0;
};

struct LossSplit {
    double loss = 0.0;      // (ext - con)/2 [N]
    double baseline = 0.0;  // (ext + con)/2 [N]
    bool anomalous = false; // contraction mean exceeded extension mean
};

// One operating condition reduced from a trace.
struct Condition {
    double pressure = 0.0;  // retraction pressure [Pa], negative
    double rate = 0.0;      // extension-rate magnitude [m/s]
    double loss = 0.0;      // [N]
    double baseline = 0.0;  // [N]
};

struct FitResult {
    double effective_area = 0.0;  // [m^2]
    double yield_force = 0.0;     // [N]
    double viscous_coeff = 0.0;   // [N per m/s]
    double rms_residual = 0.0;    // over the fitted condition equations [N]
    double pct_error = 0.0;       // mean |model-data|/|data| over directions [%]
};

struct ResidualStats {
    double rms = 0.0;               // model-to-sample RMS in the window [N]
    double pct_error_ext = 0.0;     // (model mean - data mean)/|data mean| [%]
    double pct_error_con = 0.0;
    double pct_error_mean_abs = 0.0;
};

// Central-difference velocity of (t, x), optionally smoothed by a centered
// moving average. Machine-commanded rates are not stored in real traces, so
// analysis always re-derives the velocity.
std::vector<double> finite_difference_velocity(const ForceTrace& trace, int smoothing_window);

// Splits at velocity sign changes, discards samples outside the window and
// within the settling margin after each reversal.
std::vector<TraceSegment> segment_trace(const ForceTrace& trace, const AnalysisOptions& options);

// Per-direction mean and SD over all in-window samples.
std::pair<DirectionStats, DirectionStats> average_forces(const std::vector<TraceSegment>& segments);

// Loss is half the difference of the direction averages, the baseline their
// mean. An inverted ordering is flagged, not rejected.
LossSplit compute_losses(double ext_mean, double con_mean);

struct TraceAnalysis {
    Condition condition;
    DirectionStats ext;
    DirectionStats con;
    LossSplit losses;
};

// Full single-trace reduction. The condition pressure is the in-window mean
// of the recorded retraction pressure; the rate is the median finite-
// difference speed.
TraceAnalysis analyze_trace(const ForceTrace& trace, const AnalysisOptions& options);

// OLS fit: effective area from baseline vs |P1|/2 through the origin,
// (yield, viscous) affine from loss vs rate. Needs at least two distinct
// pressures and two distinct rates.
FitResult fit_model(const std::vector<Condition>& conditions);

// Model-to-data residuals of a fit against one trace, over the analysis
// window. Model forces use each segment's median speed.
ResidualStats residual_stats(const FitResult& fit, const ForceTrace& trace,
                             const AnalysisOptions& options);

}  // namespace invacc
