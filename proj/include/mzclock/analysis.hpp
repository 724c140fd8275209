#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzclock/constants.hpp"
#include "mzclock/interferometer.hpp"

namespace mzclock {

// Planning tables assume a round surface acceleration.
inline constexpr double planning_gravity = 10.0; // [m/s^2]

// Candidate experimental platform. `omega` is the clock's angular frequency
// (E1 - E0)/hbar; `achieved_dhdt` is the demonstrated arm separation times
// hold time. The required value is always recomputed, never stored.
struct SystemCatalogEntry {
    std::string name;
    std::string clock_mechanism;
    double omega;         // [1/s]
    double achieved_dhdt; // [m s]
};

inline std::vector<SystemCatalogEntry> builtin_catalog() {
    return {
        {"atoms", "hyperfine states", 1e15, 1e-5},
        {"electrons", "spin precession", 1e13, 1e-6},
        {"molecules", "vibrational modes", 1e12, 1e-8},
        {"neutrons", "spin precession", 1e10, 1e-6},
    };
}

// Separation-times-hold-time product that drives the fringe visibility of a
// two-level clock of frequency omega to zero:
//   dh dT = pi c^2 / (g omega),
// the solution of omega g dh dT / (2 c^2) = pi/2.
inline double required_dhdt(double omega, double g, const PhysicalConstants& k) {
    if (!(omega > 0.0)) throw std::domain_error("required_dhdt: omega must be > 0");
    if (!(g > 0.0)) throw std::domain_error("required_dhdt: g must be > 0");
    return std::numbers::pi * k.c2() / (g * omega);
}

// Width bound on a Gaussian proper-time degree of freedom compatible with a
// null visibility measurement of accuracy visibility_error:
//   sigma_tau > |delta_tau| / sqrt(-8 ln(1 - visibility_error)).
inline double sigma_tau_bound(double delta_tau, double visibility_error) {
    if (!(visibility_error > 0.0 && visibility_error < 1.0))
        throw std::domain_error("sigma_tau_bound: visibility_error must be in (0, 1)");
    if (!std::isfinite(delta_tau))
        throw std::domain_error("sigma_tau_bound: delta_tau must be finite");
    return std::abs(delta_tau) / std::sqrt(-8.0 * std::log1p(-visibility_error));
}

enum class Verdict {
    sharp_proper_time_dof_disproved, // V_m = 0: sharply defined quantum d.o.f.
    dof_with_uncertainty,            // 0 < V_m < V_QM: quantum d.o.f. of width sigma_tau
    no_dof_or_broad,                 // V_m = V_QM: no quantum d.o.f., or very broad
    complementarity_violation,       // V_m > V_QM
};

inline const char* verdict_label(Verdict v) {
    switch (v) {
        case Verdict::sharp_proper_time_dof_disproved:
            return "proper time: quantum d.o.f., sharply defined";
        case Verdict::dof_with_uncertainty:
            return "proper time: quantum d.o.f. with uncertainty sigma_tau";
        case Verdict::no_dof_or_broad:
            return "proper time: not a quantum d.o.f., or has a very broad uncertainty";
        case Verdict::complementarity_violation:
            return "quantum interferometric complementarity does not hold";
    }
    return "unknown";
}

struct OutcomeClassification {
    double v_measured;
    double v_qm;
    double visibility_error;
    Verdict verdict;
    std::optional<double> sigma_tau; // [s], dof_with_uncertainty branch only
};

// Deterministic outcome classification. Comparisons use the measurement
// error as the tolerance band; |V_m - V_QM| exactly equal to the band
// resolves to the equality branch.
inline OutcomeClassification classify_outcome(double v_measured, double v_qm,
                                              double visibility_error, double delta_tau) {
    if (!(v_measured >= 0.0 && v_measured <= 1.0))
        throw std::domain_error("classify_outcome: measured visibility must be in [0, 1]");
    if (!(v_qm >= 0.0 && v_qm <= 1.0))
        throw std::domain_error("classify_outcome: predicted visibility must be in [0, 1]");
    if (!(visibility_error > 0.0 && visibility_error < 1.0))
        throw std::domain_error("classify_outcome: visibility_error must be in (0, 1)");

    OutcomeClassification out{v_measured, v_qm, visibility_error,
                              Verdict::no_dof_or_broad, std::nullopt};
    if (std::abs(v_measured - v_qm) <= visibility_error) {
        out.verdict = Verdict::no_dof_or_broad;
    } else if (v_measured > v_qm) {
        out.verdict = Verdict::complementarity_violation;
    } else if (v_measured <= visibility_error) {
        out.verdict = Verdict::sharp_proper_time_dof_disproved;
    } else {
        out.verdict = Verdict::dof_with_uncertainty;
        out.sigma_tau = sigma_tau_bound(delta_tau, visibility_error);
    }
    return out;
}

struct FeasibilityReport {
    double required_dhdt;        // [m s] for full visibility loss
    double achieved_dhdt;        // [m s]
    double ratio;               // required / achieved
    double predicted_visibility; // at the achieved parameters
    double visibility_deficit;   // 1 - V, kept accurate for near-unit V
};

// Required-versus-achieved comparison for one platform. The predicted
// visibility at the achieved parameters is |cos(x)| with
// x = omega g dhdt / (2 c^2); the deficit 1 - |cos x| is computed from
// half-angle forms so that values of order 1e-13 survive.
inline FeasibilityReport feasibility_report(const SystemCatalogEntry& entry, double g,
                                            const PhysicalConstants& k) {
    if (!(entry.achieved_dhdt > 0.0))
        throw std::domain_error("feasibility_report: achieved dhdt must be > 0");
    const double req = required_dhdt(entry.omega, g, k);
    const double x = entry.omega * g * entry.achieved_dhdt / (2.0 * k.c2());
    const double c = std::cos(x);
    const double sh = std::sin(0.5 * x);
    const double ch = std::cos(0.5 * x);
    const double deficit = (c >= 0.0) ? 2.0 * sh * sh : 2.0 * ch * ch;
    return {req, entry.achieved_dhdt, req / entry.achieved_dhdt, std::abs(c), deficit};
}

} // namespace mzclock
