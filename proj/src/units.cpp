#include "invacc/units.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <string>

#include "invacc/errors.hpp"

namespace invacc::units {

namespace {

struct UnitEntry {
    std::string_view token;
    double factor;
};

constexpr std::array length_units{
    UnitEntry{"m", 1.0}, UnitEntry{"cm", centimeter}, UnitEntry{"mm", millimeter},
    UnitEntry{"um", micrometer},
};
constexpr std::array area_units{
    UnitEntry{"m^2", 1.0},  UnitEntry{"m2", 1.0},  UnitEntry{"cm^2", cm2},
    UnitEntry{"cm2", cm2},  UnitEntry{"mm^2", mm2}, UnitEntry{"mm2", mm2},
};
constexpr std::array pressure_units{
    UnitEntry{"Pa", 1.0}, UnitEntry{"kPa", kilopascal}, UnitEntry{"MPa", megapascal},
};
constexpr std::array force_units{
    UnitEntry{"N", 1.0},
};
constexpr std::array stiffness_units{
    UnitEntry{"N/m", 1.0}, UnitEntry{"kN/m", 1.0e3}, UnitEntry{"N/mm", 1.0e3},
};
constexpr std::array viscous_units{
    UnitEntry{"N.s/m", 1.0}, UnitEntry{"N*s/m", 1.0}, UnitEntry{"N/(m/s)", 1.0},
};
constexpr std::array velocity_units{
    UnitEntry{"m/s", 1.0},          UnitEntry{"mm/s", mm_per_s},
    UnitEntry{"cm/s", centimeter},  UnitEntry{"mm/min", mm_per_min},
    UnitEntry{"m/min", 1.0 / 60.0},
};
constexpr std::array time_units{
    UnitEntry{"s", 1.0}, UnitEntry{"ms", millisecond}, UnitEntry{"min", minute},
};
constexpr std::array scalar_units{
    UnitEntry{"-", 1.0}, UnitEntry{"%", 0.01},
};

std::pair<const UnitEntry*, std::size_t> table_for(Dimension dim) {
    switch (dim) {
        case Dimension::length: return {length_units.data(), length_units.size()};
        case Dimension::area: return {area_units.data(), area_units.size()};
        case Dimension::pressure: return {pressure_units.data(), pressure_units.size()};
        case Dimension::force: return {force_units.data(), force_units.size()};
        case Dimension::stiffness: return {stiffness_units.data(), stiffness_units.size()};
        case Dimension::viscous_coeff: return {viscous_units.data(), viscous_units.size()};
        case Dimension::velocity: return {velocity_units.data(), velocity_units.size()};
        case Dimension::time: return {time_units.data(), time_units.size()};
        case Dimension::scalar: return {scalar_units.data(), scalar_units.size()};
    }
    return {nullptr, 0};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string with_context(std::string_view context, std::string msg) {
    if (context.empty()) return msg;
    return std::string(context) + ": " + msg;
}

}  // namespace

std::string_view dimension_name(Dimension dim) {
    switch (dim) {
        case Dimension::length: return "length";
        case Dimension::area: return "area";
        case Dimension::pressure: return "pressure";
        case Dimension::force: return "force";
        case Dimension::stiffness: return "stiffness";
        case Dimension::viscous_coeff: return "viscous coefficient";
        case Dimension::velocity: return "velocity";
        case Dimension::time: return "time";
        case Dimension::scalar: return "scalar";
    }
    return "?";
}

double unit_factor(std::string_view unit, Dimension dim) {
    auto [table, n] = table_for(dim);
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i].token == unit) return table[i].factor;
    }
    throw ValidationError("unit mismatch: '" + std::string(unit) + "' is not a " +
                          std::string(dimension_name(dim)) + " unit");
}

double parse_quantity(std::string_view text, Dimension dim, std::string_view context) {
    std::string_view s = trim(text);
    if (s.empty()) throw ValidationError(with_context(context, "empty value"));

    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) {
        throw ValidationError(with_context(context, "cannot parse number in '" + std::string(s) + "'"));
    }
    std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
    if (unit.empty()) {
        if (dim == Dimension::scalar) return value;
        throw ValidationError(with_context(
            context, "missing " + std::string(dimension_name(dim)) + " unit in '" + std::string(s) + "'"));
    }
    try {
        return value * unit_factor(unit, dim);
    } catch (const ValidationError& e) {
        throw ValidationError(with_context(context, e.what()));
    }
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        return buf;
    }
    return std::string(buf, ptr);
}

}  // namespace invacc::units
