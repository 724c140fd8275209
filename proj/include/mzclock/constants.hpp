#pragma once

#include <optional>
#include <stdexcept>

namespace mzclock {

// CODATA SI values. c and hbar are exact by definition since the 2019
// redefinition of the SI; G is the recommended value.
struct PhysicalConstants {
    double c = 299792458.0;        // speed of light [m/s]
    double hbar = 1.054571817e-34; // reduced Planck constant [J s]
    double G = 6.67430e-11;        // gravitational constant [m^3/(kg s^2)]

    double c2() const { return c * c; }

    void validate() const {
        if (!(c > 0.0) || !(hbar > 0.0) || !(G > 0.0))
            throw std::invalid_argument(
                "PhysicalConstants: c, hbar and G must be strictly positive");
    }
};

// Gravitating source and laboratory position. The laboratory origin sits at
// radial distance `source_radius` from the centre of the source; heights in
// the rest of the library are offsets from that origin. When `g_override` is
// set it replaces GM/R^2 as the local acceleration (planning tables assume a
// round g = 10 m/s^2); the potential at the origin always comes from M and R.
struct FieldConfig {
    double source_mass = 5.972e24;    // [kg], Earth
    double source_radius = 6.371e6;   // [m], Earth mean radius
    std::optional<double> g_override; // [m/s^2]

    void validate() const {
        if (!(source_mass > 0.0))
            throw std::invalid_argument("FieldConfig: source_mass must be > 0");
        if (!(source_radius > 0.0))
            throw std::invalid_argument("FieldConfig: source_radius must be > 0");
        if (g_override && !(*g_override > 0.0))
            throw std::invalid_argument("FieldConfig: g_override must be > 0 when set");
    }

    double gravity(const PhysicalConstants& k) const {
        if (g_override) return *g_override;
        return k.G * source_mass / (source_radius * source_radius);
    }

    // Newtonian potential at the laboratory origin, phi(R) = -GM/R.
    double potential_at_origin(const PhysicalConstants& k) const {
        return -k.G * source_mass / source_radius;
    }

    // Linearized potential at height h above the origin.
    double potential_at(double height, const PhysicalConstants& k) const {
        return potential_at_origin(k) + gravity(k) * height;
    }
};

} // namespace mzclock
