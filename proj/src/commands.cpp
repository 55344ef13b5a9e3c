#include "invacc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "invacc/errors.hpp"
#include "invacc/trace.hpp"

namespace invacc {

namespace {

using units::Dimension;

std::string fmt(double value, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << value;
    return os.str();
}

std::pair<double, double> parse_window_arg(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("--window expects LO:HI, e.g. 5cm:50cm");
    }
    const double lo = units::parse_quantity(text.substr(0, colon), Dimension::length, "--window lo");
    const double hi = units::parse_quantity(text.substr(colon + 1), Dimension::length, "--window hi");
    return {lo, hi};
}

// OLS slope of force vs extension over the pre-slip rise (between 10% and
// 90% of the peak), which measures the series tendon stiffness.
double rising_slope(const ForceTrace& trace, double peak) {
    double sx = 0.0, sf = 0.0, sxx = 0.0, sxf = 0.0;
    std::size_t n = 0;
    for (const auto& s : trace.samples) {
        if (s.force < 0.1 * peak || s.force > 0.9 * peak) continue;
        sx += s.x;
        sf += s.force;
        sxx += s.x * s.x;
        sxf += s.x * s.force;
        ++n;
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (n < 2 || denom == 0.0) {
        throw NumericalError("clutch report: too few samples on the elastic rise");
    }
    return (static_cast<double>(n) * sxf - sx * sf) / denom;
}

}  // namespace

void cmd_simulate(const SimulateOptions& opt, const Config& config, std::ostream& log,
                  ReportUnits units_mode) {
    Profile profile = load_profile(opt.profile_path, config.sim);
    if (opt.seed) profile.seed = *opt.seed;
    const DeviceParams device{config.actuator, config.clutch};
    const ForceTrace trace = run_profile(profile, device);
    write_trace_csv(trace, opt.out_path);

    const auto& last = trace.samples.back();
    log << "simulate: " << trace.samples.size() << " samples over " << fmt(last.t)
        << " s -> " << opt.out_path.string() << "\n";
    if (units_mode == ReportUnits::bench) {
        log << "  final extension " << fmt(last.x / units::centimeter) << " cm, force "
            << fmt(last.force) << " N\n";
    } else {
        log << "  final extension " << fmt(last.x) << " m, force " << fmt(last.force) << " N\n";
    }
    if (trace.metadata.count("end_stop")) {
        log << "  warning: the commanded motion hit a stroke end stop\n";
    }
}

FitResult cmd_identify(const IdentifyOptions& opt, const Config& config, std::ostream& log,
                       ReportUnits units_mode) {
    if (opt.trace_paths.empty()) throw ValidationError("identify: no trace files given");
    AnalysisOptions options = config.analysis;
    if (opt.window) {
        options.window_lo = opt.window->first;
        options.window_hi = opt.window->second;
        if (!(options.window_lo >= 0.0) || !(options.window_lo < options.window_hi)) {
            throw ValidationError("identify: window must satisfy 0 <= lo < hi");
        }
    }

    std::vector<ForceTrace> traces;
    std::vector<Condition> conditions;
    for (const auto& path : opt.trace_paths) {
        traces.push_back(read_trace_csv(path));
        const auto analysis = analyze_trace(traces.back(), options);
        conditions.push_back(analysis.condition);
        if (analysis.losses.anomalous) {
            log << "  warning: inverted hysteresis ordering in " << path.string() << "\n";
        }
    }
    const FitResult fit = fit_model(conditions);
    double rms_sum = 0.0;
    for (const auto& trace : traces) rms_sum += residual_stats(fit, trace, options).rms;
    const double windowed_rms = rms_sum / static_cast<double>(traces.size());

    const bool bench = units_mode == ReportUnits::bench;
    log << "identify: " << conditions.size() << " conditions from " << traces.size()
        << " trace(s)\n";
    if (bench) {
        log << "  effective_area  " << fmt(fit.effective_area / units::cm2) << " cm^2\n";
    } else {
        log << "  effective_area  " << fmt(fit.effective_area) << " m^2\n";
    }
    log << "  yield_force     " << fmt(fit.yield_force) << " N\n";
    log << "  viscous_coeff   " << fmt(fit.viscous_coeff) << " N.s/m\n";
    log << "  rms_residual    " << fmt(fit.rms_residual) << " N (condition equations)\n";
    log << "  windowed_rms    " << fmt(windowed_rms) << " N (mean over traces)\n";
    log << "  pct_error       " << fmt(fit.pct_error) << " % (mean |model-data|)\n";
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        const auto& c = conditions[i];
        log << "  condition ";
        if (bench) {
            log << fmt(c.pressure / units::kilopascal) << " kPa, "
                << fmt(c.rate / units::mm_per_min) << " mm/min";
        } else {
            log << fmt(c.pressure) << " Pa, " << fmt(c.rate) << " m/s";
        }
        log << ": baseline " << fmt(c.baseline) << " N, loss " << fmt(c.loss) << " N ("
            << opt.trace_paths[i].filename().string() << ")\n";
    }

    if (opt.out_path) {
        std::ofstream out(*opt.out_path, std::ios::binary);
        if (!out) throw IoError("cannot open " + opt.out_path->string() + " for writing");
        out << "# identified force-model coefficients\n";
        out << "effective_area = " << units::format_double(fit.effective_area) << " m^2\n";
        out << "yield_force = " << units::format_double(fit.yield_force) << " N\n";
        out << "viscous_coeff = " << units::format_double(fit.viscous_coeff) << " N.s/m\n";
        out << "rms_residual = " << units::format_double(fit.rms_residual) << " N\n";
        out << "windowed_rms = " << units::format_double(windowed_rms) << " N\n";
        out << "pct_error = " << units::format_double(fit.pct_error) << " %\n";
        out << "conditions = " << conditions.size() << " -\n";
        if (!out.flush()) throw IoError("failed writing " + opt.out_path->string());
    }
    return fit;
}

void cmd_envelope(const EnvelopeOptions& opt, const Config& config, std::ostream& log) {
    const DeviceParams device{config.actuator, config.clutch};
    const auto table = force_envelope(device, opt.p1_max_mag, opt.p2_max, opt.rate, opt.samples);

    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + opt.out_path.string() + " for writing");
    out << "curve,pressure_kPa,force_N\n";
    const auto emit = [&](const char* name, const EnvelopeCurve& curve) {
        for (std::size_t i = 0; i < curve.pressure.size(); ++i) {
            out << name << ',' << units::format_double(curve.pressure[i] / units::kilopascal)
                << ',' << units::format_double(curve.force[i]) << '\n';
        }
    };
    emit("retraction", table.retraction);
    emit("extension_resist", table.extension);
    emit("slip_limit", table.slip_limit);
    if (!out.flush()) throw IoError("failed writing " + opt.out_path.string());

    log << "envelope: " << opt.samples << " points per curve -> " << opt.out_path.string()
        << "\n";
    log << "  peak retraction " << fmt(table.retraction.force.front()) << " N at "
        << fmt(table.retraction.pressure.front() / units::kilopascal) << " kPa\n";
    log << "  peak slip limit " << fmt(table.slip_limit.force.back()) << " N at "
        << fmt(table.slip_limit.pressure.back() / units::kilopascal) << " kPa\n";
}

std::vector<ClutchReportRow> cmd_clutch(const ClutchReportOptions& opt, const Config& config,
                                        std::ostream& log) {
    if (opt.p2_values.empty()) throw ValidationError("clutch report: no clutching pressures");
    if (!(opt.rate > 0.0)) throw ValidationError("clutch report: rate must be positive");
    if (opt.p1 > 0.0) throw ValidationError("clutch report: vacuum pressure must be <= 0");
    const DeviceParams device{config.actuator, config.clutch};

    std::vector<ClutchReportRow> rows;
    for (const double p2 : opt.p2_values) {
        const auto slip = slip_threshold(p2, device.clutch);
        if (slip.extrapolated) {
            log << "  warning: " << fmt(p2 / units::kilopascal)
                << " kPa is outside the tabulated slip curve, threshold clamped\n";
        }
        // Pull far enough through the slip boundary to see the plateau.
        const double x_slip = slip.force / device.clutch.tendon_stiffness;
        const double travel = std::min(1.25 * x_slip + 0.01, device.actuator.stroke_max);
        Profile profile;
        profile.dt = config.sim.dt;
        profile.seed = config.sim.seed;
        profile.segments.push_back({travel / opt.rate, opt.rate, opt.p1, p2});
        const auto trace = run_profile(profile, device);

        double peak = 0.0;
        for (const auto& s : trace.samples) peak = std::max(peak, s.force);
        ClutchReportRow row;
        row.p2 = p2;
        row.peak = peak;
        row.peak_per_kpa = peak / (p2 / units::kilopascal);
        row.elastic_slope = rising_slope(trace, peak);
        rows.push_back(row);
    }

    log << "clutch pull-through at " << fmt(opt.rate / units::mm_per_min) << " mm/min";
    if (opt.p1 < 0.0) log << " with " << fmt(opt.p1 / units::kilopascal) << " kPa vacuum";
    log << "\n";
    log << "  P2 [kPa]   peak [N]   peak/P2 [N/kPa]   slope [N/m]\n";
    for (const auto& row : rows) {
        log << "  " << std::setw(8) << fmt(row.p2 / units::kilopascal) << "   " << std::setw(8)
            << fmt(row.peak) << "   " << std::setw(15) << fmt(row.peak_per_kpa) << "   "
            << std::setw(11) << fmt(row.elastic_slope) << "\n";
    }

    if (opt.out_path) {
        std::ofstream out(*opt.out_path, std::ios::binary);
        if (!out) throw IoError("cannot open " + opt.out_path->string() + " for writing");
        out << "P2_kPa,peak_N,peak_per_pressure_N_per_kPa,elastic_slope_N_per_m\n";
        for (const auto& row : rows) {
            out << units::format_double(row.p2 / units::kilopascal) << ','
                << units::format_double(row.peak) << ','
                << units::format_double(row.peak_per_kpa) << ','
                << units::format_double(row.elastic_slope) << '\n';
        }
        if (!out.flush()) throw IoError("failed writing " + opt.out_path->string());
    }
    return rows;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"inverting-tube vacuum actuator: simulation, identification and reports"};
    app.require_subcommand(1);

    std::string config_path;
    auto* config_opt = app.add_option(
        "-c,--config", config_path,
        "device/analysis configuration file (built-in prototype values otherwise)");
    std::string units_name = "bench";
    app.add_option("--units", units_name, "summary units: bench (cm, kPa, mm/min) or si")
        ->check(CLI::IsMember({"bench", "si"}));

    auto* sim = app.add_subcommand("simulate", "run a command profile and write the trace CSV");
    std::string profile_path;
    std::string sim_out;
    std::uint64_t seed_value = 0;
    sim->add_option("profile", profile_path, "profile file")->required();
    sim->add_option("-o,--out", sim_out, "output trace CSV")->required();
    auto* seed_opt = sim->add_option("--seed", seed_value, "noise seed, overrides the profile");

    auto* ident = app.add_subcommand("identify", "fit force-model coefficients to trace CSVs");
    std::vector<std::string> trace_args;
    ident->add_option("traces", trace_args, "trace CSV files")->required()->expected(-1);
    std::string ident_out;
    auto* ident_out_opt = ident->add_option("-o,--out", ident_out, "machine-readable report");
    std::string window_text;
    auto* window_opt =
        ident->add_option("--window", window_text, "analysis window LO:HI, e.g. 5cm:50cm");

    auto* env = app.add_subcommand("envelope", "tabulate the force capability curves");
    std::string env_out;
    env->add_option("-o,--out", env_out, "output CSV")->required();
    std::string p1_max_text = "101.325 kPa";
    std::string p2_max_text = "50 kPa";
    std::string env_rate_text = "100 mm/min";
    int env_samples = 41;
    env->add_option("--p1-max", p1_max_text, "vacuum magnitude to sweep to");
    env->add_option("--p2-max", p2_max_text, "clutching pressure to sweep to");
    env->add_option("--rate", env_rate_text, "extension rate for the loss terms");
    env->add_option("--samples", env_samples, "points per curve")->check(CLI::Range(2, 1000000));

    auto* cl = app.add_subcommand("clutch", "simulated clutch pull-through report");
    std::vector<std::string> p2_texts;
    cl->add_option("--p2", p2_texts, "clutching pressures, e.g. 10kPa 30kPa")
        ->required()
        ->expected(-1);
    std::string cl_rate_text = "100 mm/min";
    std::string cl_p1_text = "0 kPa";
    cl->add_option("--rate", cl_rate_text, "pull rate");
    cl->add_option("--p1", cl_p1_text, "simultaneous vacuum during the pull");
    std::string cl_out;
    auto* cl_out_opt = cl->add_option("-o,--out", cl_out, "report CSV");

    auto* defaults_cmd =
        app.add_subcommand("defaults", "write the built-in configuration to a file");
    std::string defaults_out = "invacc.conf";
    defaults_cmd->add_option("-o,--out", defaults_out, "destination path");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }

        if (defaults_cmd->parsed()) {
            write_default_config(defaults_out);
            std::cout << "wrote " << defaults_out << "\n";
            return 0;
        }

        const ReportUnits units_mode = units_name == "si" ? ReportUnits::si : ReportUnits::bench;
        const Config config = *config_opt ? load_config(config_path) : default_config();

        if (sim->parsed()) {
            SimulateOptions opt;
            opt.profile_path = profile_path;
            opt.out_path = sim_out;
            if (*seed_opt) opt.seed = seed_value;
            cmd_simulate(opt, config, std::cout, units_mode);
        } else if (ident->parsed()) {
            IdentifyOptions opt;
            for (const auto& p : trace_args) opt.trace_paths.emplace_back(p);
            if (*ident_out_opt) opt.out_path = ident_out;
            if (*window_opt) opt.window = parse_window_arg(window_text);
            cmd_identify(opt, config, std::cout, units_mode);
        } else if (env->parsed()) {
            EnvelopeOptions opt;
            opt.out_path = env_out;
            opt.p1_max_mag =
                std::abs(units::parse_quantity(p1_max_text, Dimension::pressure, "--p1-max"));
            opt.p2_max = units::parse_quantity(p2_max_text, Dimension::pressure, "--p2-max");
            opt.rate = units::parse_quantity(env_rate_text, Dimension::velocity, "--rate");
            opt.samples = env_samples;
            cmd_envelope(opt, config, std::cout);
        } else if (cl->parsed()) {
            ClutchReportOptions opt;
            for (const auto& t : p2_texts) {
                opt.p2_values.push_back(units::parse_quantity(t, Dimension::pressure, "--p2"));
            }
            opt.rate = units::parse_quantity(cl_rate_text, Dimension::velocity, "--rate");
            opt.p1 = units::parse_quantity(cl_p1_text, Dimension::pressure, "--p1");
            if (*cl_out_opt) opt.out_path = cl_out;
            cmd_clutch(opt, config, std::cout);
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("invacc");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace invacc
