#include "invacc/sysid.hpp"

#include <algorithm>
#include <cmath>

#include "invacc/errors.hpp"

namespace invacc {

namespace {

// Sign-change detection below this speed is noise, not motion [m/s].
constexpr double kZeroRate = 1.0e-12;

// Conditions whose pressures or rates agree within this relative tolerance
// count as one level of the experimental design.
constexpr double kLevelTolerance = 1.0e-2;

double median(std::vector<double> v) {
    const auto n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

std::size_t count_levels(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t levels = values.empty() ? 0 : 1;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] - values[i - 1] > kLevelTolerance * std::abs(values[i - 1]) + 1.0e-12) {
            ++levels;
        }
    }
    return levels;
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

MeanSd mean_sd(const std::vector<double>& values) {
    MeanSd out;
    out.n = values.size();
    if (out.n == 0) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(out.n);
    if (out.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(out.n - 1));
    }
    return out;
}

}  // namespace

std::vector<double> finite_difference_velocity(const ForceTrace& trace, int smoothing_window) {
    trace.validate();
    const auto& s = trace.samples;
    const std::size_t n = s.size();
    std::vector<double> v(n, 0.0);
    if (n == 1) return v;
    v[0] = (s[1].x - s[0].x) / (s[1].t - s[0].t);
    v[n - 1] = (s[n - 1].x - s[n - 2].x) / (s[n - 1].t - s[n - 2].t);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        v[i] = (s[i + 1].x - s[i - 1].x) / (s[i + 1].t - s[i - 1].t);
    }
    if (smoothing_window > 1) {
        const int half = smoothing_window / 2;
        std::vector<double> smoothed(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - static_cast<std::size_t>(half) : 0;
            const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(half));
            double sum = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) sum += v[j];
            smoothed[i] = sum / static_cast<double>(hi - lo + 1);
        }
        v = std::move(smoothed);
    }
    return v;
}

std::vector<TraceSegment> segment_trace(const ForceTrace& trace, const AnalysisOptions& options) {
    if (!(options.window_lo < options.window_hi)) {
        throw ValidationError("segment_trace: empty analysis window");
    }
    const auto velocity = finite_difference_velocity(trace, options.smoothing_window);
    const auto& s = trace.samples;

    std::vector<TraceSegment> segments;
    std::size_t i = 0;
    while (i < s.size()) {
        const double vi = velocity[i];
        const int sign = vi > kZeroRate ? 1 : (vi < -kZeroRate ? -1 : 0);
        if (sign == 0) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < s.size()) {
            const double vj = velocity[i];
            const int sj = vj > kZeroRate ? 1 : (vj < -kZeroRate ? -1 : 0);
            if (sj != sign) break;
            ++i;
        }
        // [begin, i) is one directed run; its first sample marks the reversal.
        TraceSegment seg;
        seg.direction = sign > 0 ? Direction::extension : Direction::contraction;
        const double x_reversal = s[begin].x;
        for (std::size_t j = begin; j < i; ++j) {
            if (std::abs(s[j].x - x_reversal) < options.settling_margin) continue;
            if (s[j].x < options.window_lo || s[j].x > options.window_hi) continue;
            seg.samples.push_back({s[j].t, s[j].x, velocity[j], s[j].force, s[j].p1});
        }
        if (!seg.samples.empty()) segments.push_back(std::move(seg));
    }
    if (segments.empty()) {
        throw NumericalError("segment_trace: no samples inside the analysis window");
    }
    return segments;
}

std::pair<DirectionStats, DirectionStats> average_forces(const std::vector<TraceSegment>& segments) {
    std::vector<double> ext_forces;
    std::vector<double> con_forces;
    for (const auto& seg : segments) {
        auto& bucket = seg.direction == Direction::extension ? ext_forces : con_forces;
        for (const auto& sample : seg.samples) bucket.push_back(sample.force);
    }
    if (ext_forces.empty()) throw NumericalError("average_forces: no extension segments");
    if (con_forces.empty()) throw NumericalError("average_forces: no contraction segments");
    const auto e = mean_sd(ext_forces);
    const auto c = mean_sd(con_forces);
    return {DirectionStats{Direction::extension, e.mean, e.sd, e.n},
            DirectionStats{Direction::contraction, c.mean, c.sd, c.n}};
}

LossSplit compute_losses(double ext_mean, double con_mean) {
    LossSplit split;
    split.loss = 0.5 * (ext_mean - con_mean);
    split.baseline = 0.5 * (ext_mean + con_mean);
    split.anomalous = ext_mean < con_mean;  // physically the losses add on extension
    return split;
}

TraceAnalysis analyze_trace(const ForceTrace& trace, const AnalysisOptions& options) {
    TraceAnalysis out;
    const auto segments = segment_trace(trace, options);
    std::tie(out.ext, out.con) = average_forces(segments);
    out.losses = compute_losses(out.ext.mean, out.con.mean);

    std::vector<double> pressures;
    std::vector<double> speeds;
    for (const auto& seg : segments) {
        for (const auto& sample : seg.samples) {
            pressures.push_back(sample.p1);
            speeds.push_back(std::abs(sample.xdot));
        }
    }
    out.condition.pressure = mean_sd(pressures).mean;
    out.condition.rate = median(std::move(speeds));
    out.condition.loss = out.losses.loss;
    out.condition.baseline = out.losses.baseline;
    return out;
}

FitResult fit_model(const std::vector<Condition>& conditions) {
    if (conditions.size() < 2) {
        throw NumericalError("fit_model: underdetermined, need at least two conditions");
    }
    std::vector<double> pressures;
    std::vector<double> rates;
    for (const auto& c : conditions) {
        if (!(c.pressure < 0.0)) {
            throw ValidationError("fit_model: conditions need a negative retraction pressure");
        }
        if (!(c.rate > 0.0)) {
            throw ValidationError("fit_model: conditions need a positive rate magnitude");
        }
        pressures.push_back(-c.pressure);
        rates.push_back(c.rate);
    }
    if (count_levels(pressures) < 2) {
        throw NumericalError(
            "fit_model: underdetermined, only one distinct pressure (effective area needs "
            "pressure variation)");
    }
    if (count_levels(rates) < 2) {
        throw NumericalError(
            "fit_model: underdetermined, only one distinct rate (viscous coefficient needs rate "
            "variation)");
    }

    // Baseline = A_eff * (|P1|/2), regression through the origin.
    double zb = 0.0;
    double zz = 0.0;
    for (const auto& c : conditions) {
        const double z = -0.5 * c.pressure;
        zb += z * c.baseline;
        zz += z * z;
    }
    const double area = zb / zz;

    // Loss = F_yield + mu_visc * rate, affine regression.
    const double n = static_cast<double>(conditions.size());
    double sr = 0.0, sl = 0.0, srr = 0.0, srl = 0.0;
    for (const auto& c : conditions) {
        sr += c.rate;
        sl += c.loss;
        srr += c.rate * c.rate;
        srl += c.rate * c.loss;
    }
    const double denom = n * srr - sr * sr;
    const double viscous = (n * srl - sr * sl) / denom;
    const double yield = (sl - viscous * sr) / n;

    if (area < 0.0 || yield < 0.0 || viscous < 0.0) {
        throw NumericalError("fit_model: fit produced a negative coefficient");
    }

    FitResult fit;
    fit.effective_area = area;
    fit.yield_force = yield;
    fit.viscous_coeff = viscous;

    double ss = 0.0;
    double pct_sum = 0.0;
    for (const auto& c : conditions) {
        const double base_hat = -0.5 * c.pressure * area;
        const double loss_hat = yield + viscous * c.rate;
        ss += (base_hat - c.baseline) * (base_hat - c.baseline);
        ss += (loss_hat - c.loss) * (loss_hat - c.loss);
        const double ext = c.baseline + c.loss;
        const double con = c.baseline - c.loss;
        pct_sum += std::abs((base_hat + loss_hat - ext) / ext);
        pct_sum += std::abs((base_hat - loss_hat - con) / con);
    }
    fit.rms_residual = std::sqrt(ss / (2.0 * n));
    fit.pct_error = 100.0 * pct_sum / (2.0 * n);
    return fit;
}

ResidualStats residual_stats(const FitResult& fit, const ForceTrace& trace,
                             const AnalysisOptions& options) {
    const auto segments = segment_trace(trace, options);

    double ss = 0.0;
    std::size_t n = 0;
    double model_sum[2] = {0.0, 0.0};
    double data_sum[2] = {0.0, 0.0};
    std::size_t dir_n[2] = {0, 0};
    for (const auto& seg : segments) {
        std::vector<double> speeds;
        speeds.reserve(seg.samples.size());
        for (const auto& sample : seg.samples) speeds.push_back(std::abs(sample.xdot));
        const double rate = median(std::move(speeds));
        const double sign = seg.direction == Direction::extension ? 1.0 : -1.0;
        const int d = seg.direction == Direction::extension ? 0 : 1;
        for (const auto& sample : seg.samples) {
            const double model = -0.5 * fit.effective_area * sample.p1 +
                                 sign * (fit.yield_force + fit.viscous_coeff * rate);
            const double r = model - sample.force;
            ss += r * r;
            ++n;
            model_sum[d] += model;
            data_sum[d] += sample.force;
            ++dir_n[d];
        }
    }
    if (dir_n[0] == 0 || dir_n[1] == 0) {
        throw NumericalError("residual_stats: trace lacks one motion direction in the window");
    }

    ResidualStats out;
    out.rms = std::sqrt(ss / static_cast<double>(n));
    const double ext_model = model_sum[0] / static_cast<double>(dir_n[0]);
    const double ext_data = data_sum[0] / static_cast<double>(dir_n[0]);
    const double con_model = model_sum[1] / static_cast<double>(dir_n[1]);
    const double con_data = data_sum[1] / static_cast<double>(dir_n[1]);
    out.pct_error_ext = 100.0 * (ext_model - ext_data) / std::abs(ext_data);
    out.pct_error_con = 100.0 * (con_model - con_data) / std::abs(con_data);
    out.pct_error_mean_abs = 0.5 * (std::abs(out.pct_error_ext) + std::abs(out.pct_error_con));
    return out;
}

}  // namespace invacc
