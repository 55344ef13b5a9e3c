#pragma once

// Bilinear tendon stress-strain idealization: elastic to the yield point,
// then strain-hardening to the ultimate point.

namespace invacc {

struct MaterialCurve {
    double area = 0.0;            // tendon cross section [m^2]
    double yield_force = 0.0;     // [N]
    double yield_strain = 0.0;    // [-]
    double ultimate_force = 0.0;  // [N]
    double ultimate_strain = 0.0; // [-]

    void validate() const;

    // Layflat polyethylene tubing as characterized on the prototype.
    static MaterialCurve layflat_polyethylene();
};

// Tension at a given strain; throws past the ultimate strain (rupture).
double tendon_tension(double strain, const MaterialCurve& curve);

// Linearized axial stiffness of a tendon with the given free length,
// from the elastic slope of the curve.
double tendon_stiffness(double free_length, const MaterialCurve& curve);

}  // namespace invacc
