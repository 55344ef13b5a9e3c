#include "invacc/material.hpp"

#include "invacc/errors.hpp"
#include "invacc/units.hpp"

namespace invacc {

void MaterialCurve::validate() const {
    if (!(area > 0.0)) throw ValidationError("material: cross section must be positive");
    if (!(yield_strain > 0.0) || !(ultimate_strain > yield_strain)) {
        throw ValidationError("material: need 0 < yield strain < ultimate strain");
    }
    if (!(yield_force > 0.0) || !(ultimate_force > yield_force)) {
        throw ValidationError("material: need 0 < yield force < ultimate force");
    }
}

MaterialCurve MaterialCurve::layflat_polyethylene() {
    MaterialCurve m;
    m.area = 3.7 * units::mm2;
    m.yield_force = 60.0;
    m.yield_strain = 0.07;
    m.ultimate_force = 120.0;
    m.ultimate_strain = 0.33;
    return m;
}

double tendon_tension(double strain, const MaterialCurve& curve) {
    if (strain < 0.0) throw ValidationError("tendon_tension: strain must be non-negative");
    if (strain > curve.ultimate_strain) {
        throw ValidationError("tendon_tension: strain " + units::format_double(strain) +
                              " beyond ultimate strain (rupture)");
    }
    if (strain <= curve.yield_strain) {
        return curve.yield_force * strain / curve.yield_strain;
    }
    const double hardening =
        (curve.ultimate_force - curve.yield_force) / (curve.ultimate_strain - curve.yield_strain);
    return curve.yield_force + hardening * (strain - curve.yield_strain);
}

double tendon_stiffness(double free_length, const MaterialCurve& curve) {
    if (!(free_length > 0.0)) throw ValidationError("tendon_stiffness: free length must be positive");
    return (curve.yield_force / curve.yield_strain) / free_length;
}

}  // namespace invacc
