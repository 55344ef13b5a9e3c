#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "invacc/actuator.hpp"
#include "invacc/clutch.hpp"
#include "invacc/units.hpp"

namespace testutil {

// Prototype coefficient set used throughout the suite.
inline invacc::ActuatorParams prototype_actuator() {
    invacc::ActuatorParams p;
    p.tube_diameter = 0.018462;
    p.effective_area = 2.49e-4;
    p.yield_force = 2.45;
    p.viscous_coeff = 9.70;
    p.reinforced_length = 0.28;
    p.stroke_max = 0.55;
    return p;
}

inline invacc::ClutchParams prototype_clutch() {
    invacc::ClutchParams p;
    p.tendon_stiffness = (60.0 / 0.07) / 0.30;
    p.slip_curve = invacc::ClutchParams::default_slip_curve();
    p.engage_threshold = 0.0;
    return p;
}

inline double mm_min(double v) { return v * invacc::units::mm_per_min; }

// Unique scratch directory per test run.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("invacc_test_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace testutil
