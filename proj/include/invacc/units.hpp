#pragma once

#include <string>
#include <string_view>

namespace invacc::units {

inline constexpr double atmosphere_pa = 101325.0;  // standard sea-level pressure [Pa]

// Multipliers to SI.
inline constexpr double kilopascal = 1.0e3;
inline constexpr double megapascal = 1.0e6;
inline constexpr double centimeter = 1.0e-2;
inline constexpr double millimeter = 1.0e-3;
inline constexpr double micrometer = 1.0e-6;
inline constexpr double cm2 = 1.0e-4;
inline constexpr double mm2 = 1.0e-6;
inline constexpr double mm_per_min = 1.0e-3 / 60.0;
inline constexpr double mm_per_s = 1.0e-3;
inline constexpr double millisecond = 1.0e-3;
inline constexpr double minute = 60.0;

enum class Dimension {
    length,
    area,
    pressure,
    force,
    stiffness,      // N/m
    viscous_coeff,  // N per unit speed
    velocity,
    time,
    scalar,
};

std::string_view dimension_name(Dimension dim);

// Multiplier to SI for a unit token of the given dimension.
// Throws ValidationError if the token does not belong to the dimension.
double unit_factor(std::string_view unit, Dimension dim);

// Parses "<number> [unit]" into an SI value. The unit token is required for
// every dimension except scalar (where "-" and "%" are also accepted).
double parse_quantity(std::string_view text, Dimension dim, std::string_view context = {});

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace invacc::units
