#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "mzclock/constants.hpp"

namespace mzclock {

// Validity guards for the quadratic weak-field / slow-particle expansion.
// Outside these ranges the truncated series degrades silently, so violations
// are hard errors rather than warnings.
inline constexpr double weak_field_guard = 1e-3;    // |phi|/c^2
inline constexpr double slow_speed_guard = 1e-2;    // |v|/c
inline constexpr double linear_height_guard = 1e-3; // |delta_h|/R

namespace detail {

inline void require_weak_field(double phi, const PhysicalConstants& k) {
    const double ratio = std::abs(phi) / k.c2();
    if (!(ratio < weak_field_guard))
        throw std::domain_error("weak-field guard violated: |phi|/c^2 = " +
                                std::to_string(ratio) + " (limit 1e-3)");
}

inline void require_slow(double speed, const PhysicalConstants& k) {
    const double beta = std::abs(speed) / k.c;
    if (!(beta < slow_speed_guard))
        throw std::domain_error("slow-particle guard violated: |v|/c = " +
                                std::to_string(beta) + " (limit 1e-2)");
}

} // namespace detail

// Static metric around a spherical source, expanded to quadratic order in
// phi/c^2, signature (- + + +):
//   g00        = -(1 + 2 phi/c^2 + 2 phi^2/c^4)
//   gij_scalar = (1 - 2 phi/c^2)/c^2            (times delta_ij)
// At phi = 0 this is exactly (-1, 1/c^2 delta_ij) with coordinate time in
// seconds and lengths in metres.
struct WeakFieldMetric {
    double g00;
    double gij_scalar;
};

inline WeakFieldMetric weak_field_metric(double phi, const PhysicalConstants& k) {
    detail::require_weak_field(phi, k);
    const double pc2 = phi / k.c2();
    return {-(1.0 + 2.0 * pc2 + 2.0 * pc2 * pc2), (1.0 - 2.0 * pc2) / k.c2()};
}

// d(tau)/dt - 1 for a particle at potential phi moving at |xdot| = speed,
// from the same quadratic truncation:
//   tau_dot = sqrt(1 + 2 phi/c^2 + 2 phi^2/c^4 - (v/c)^2 (1 - 2 phi/c^2)).
// Returned as the deviation from 1, evaluated as u/(1 + sqrt(1 + u)) so the
// value stays fully resolved when it sits at or below double epsilon; the
// phase pipeline must never form tau_dot itself and subtract.
inline double tau_dot_deviation(double phi, double speed, const PhysicalConstants& k) {
    detail::require_weak_field(phi, k);
    detail::require_slow(speed, k);
    const double pc2 = phi / k.c2();
    const double beta2 = (speed / k.c) * (speed / k.c);
    const double u = 2.0 * pc2 + 2.0 * pc2 * pc2 - beta2 * (1.0 - 2.0 * pc2);
    return u / (1.0 + std::sqrt(1.0 + u));
}

// Proper-time rate d(tau)/dt itself; in (0, 1] for phi <= 0.
inline double tau_dot(double phi, double speed, const PhysicalConstants& k) {
    return 1.0 + tau_dot_deviation(phi, speed, k);
}

struct LinearizedPotential {
    double phi_origin;       // phi(R) [m^2/s^2]
    double gravity;          // effective g [m/s^2]
    double delta_v;          // g * delta_h [m^2/s^2]
    double truncation_bound; // bound on the dropped quadratic term [m^2/s^2]
};

// phi(R + delta_h) ~= phi(R) + g delta_h for |delta_h| << R. The exact
// remainder of the central potential is -g delta_h^2 / (R + delta_h), so
// g delta_h^2 / (R - |delta_h|) bounds it for either sign of the offset.
inline LinearizedPotential linearize_potential(const FieldConfig& field, double delta_h,
                                               const PhysicalConstants& k) {
    field.validate();
    const double ratio = std::abs(delta_h) / field.source_radius;
    if (!(ratio < linear_height_guard))
        throw std::domain_error("potential linearization guard violated: |delta_h|/R = " +
                                std::to_string(ratio) + " (limit 1e-3)");
    const double g = field.gravity(k);
    return {field.potential_at_origin(k), g, g * delta_h,
            g * delta_h * delta_h / (field.source_radius - std::abs(delta_h))};
}

// Total proper-time difference accumulated between two arms separated by
// potential difference delta_v for laboratory time delta_t:
//   delta_tau = delta_v * delta_t / c^2.
inline double proper_time_difference(double delta_v, double delta_t,
                                     const PhysicalConstants& k) {
    if (!(delta_t >= 0.0))
        throw std::domain_error("proper_time_difference: delta_t must be >= 0");
    return delta_v * delta_t / k.c2();
}

} // namespace mzclock
