#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzclock/clock.hpp"
#include "mzclock/constants.hpp"
#include "mzclock/weak_field.hpp"

namespace mzclock {

// One piecewise-constant leg of a semiclassical path: the particle sits at a
// fixed height offset from the laboratory origin and moves with constant
// velocity components. Transient rise/fall legs are represented as segments
// too; the symmetry check below makes sure they contribute identically to
// both arms.
struct TrajectorySegment {
    double duration;     // [s] >= 0 (zero-length segments contribute nothing)
    double height;       // [m] offset from the laboratory origin
    double vx = 0.0;     // [m/s] horizontal
    double vy = 0.0;     // [m/s] vertical
    double speed() const { return std::hypot(vx, vy); }
};

struct Trajectory {
    int label = 1; // path index, 1 or 2
    std::vector<TrajectorySegment> segments;

    double total_time() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.duration;
        return t;
    }

    // Single constant-height hold.
    static Trajectory hold(int label, double duration, double height, double vx = 0.0) {
        return {label, {{duration, height, vx, 0.0}}};
    }
};

struct InterferometerConfig {
    double mass;                // [kg]
    ClockSpec clock;
    ClockState clock_initial;
    Trajectory path1;
    Trajectory path2;
    double phase_shifter = 0.0; // [rad], applied to arm 2
    FieldConfig field{};
    PhysicalConstants constants{};

    // The per-arm phases and proper times below assume that everything except
    // the height profile is shared between the arms: equal total coordinate
    // time and an identical sequence of segment durations and speeds. Height
    // offsets are free.
    void validate() const {
        constants.validate();
        field.validate();
        if (!(mass > 0.0)) throw std::invalid_argument("InterferometerConfig: mass must be > 0");
        if (!std::isfinite(phase_shifter))
            throw std::invalid_argument("InterferometerConfig: phase shifter must be finite");
        if (clock_initial.dimension() != clock.dimension())
            throw std::invalid_argument("InterferometerConfig: clock state/spec dimension mismatch");
        for (const Trajectory* t : {&path1, &path2}) {
            if (t->segments.empty())
                throw std::invalid_argument("InterferometerConfig: trajectory has no segments");
            for (const auto& s : t->segments)
                if (!(s.duration >= 0.0) || !std::isfinite(s.height) || !std::isfinite(s.speed()))
                    throw std::invalid_argument("InterferometerConfig: bad trajectory segment");
        }
        if (path1.segments.size() != path2.segments.size())
            throw std::invalid_argument(
                "InterferometerConfig: arms must have the same segment structure");
        for (std::size_t i = 0; i < path1.segments.size(); ++i) {
            const auto& a = path1.segments[i];
            const auto& b = path2.segments[i];
            const double dt_scale = std::max({std::abs(a.duration), std::abs(b.duration), 1e-300});
            if (std::abs(a.duration - b.duration) > 1e-12 * dt_scale)
                throw std::invalid_argument(
                    "InterferometerConfig: arm segment durations differ (segment " +
                    std::to_string(i) + ")");
            const double v_scale = std::max({a.speed(), b.speed(), 1.0});
            if (std::abs(a.speed() - b.speed()) > 1e-12 * v_scale)
                throw std::invalid_argument(
                    "InterferometerConfig: arm speed profiles differ (segment " +
                    std::to_string(i) + "); equal-velocity symmetry is required");
        }
    }
};

// Relativistic corrections entering the laboratory Hamiltonian at one point
// of a trajectory, with p = m v and the internal Hamiltonian replaced by its
// expectation value (semiclassical treatment):
//   e_k    = p^2/2m (1 + 3 (p/2mc)^2 - <H_clock>/(m c^2))
//   e_corr = m phi(h)/2 - 3 p^2/2m
struct GrCorrections {
    double e_k;    // [J]
    double e_corr; // [J]
};

inline GrCorrections gr_corrections(double height, double speed, double mass,
                                    double mean_clock_energy, const FieldConfig& field,
                                    const PhysicalConstants& k) {
    if (!(mass > 0.0)) throw std::invalid_argument("gr_corrections: mass must be > 0");
    const LinearizedPotential lp = linearize_potential(field, height, k);
    const double phi = lp.phi_origin + lp.delta_v;
    detail::require_weak_field(phi, k);
    detail::require_slow(speed, k);
    const double v2 = speed * speed;
    const double beta2 = v2 / k.c2();
    const double e_kin_newton = 0.5 * mass * v2;
    const double e_k =
        e_kin_newton * (1.0 + 0.75 * beta2 - mean_clock_energy / (mass * k.c2()));
    const double e_corr = 0.5 * mass * phi - 3.0 * e_kin_newton;
    return {e_k, e_corr};
}

// Per-arm accumulated quantities. The dynamical phase integrates
//   [phi(h) (m c^2 + E_corr) - phi(R) m c^2] / (hbar c^2)
// over the arm: the subtracted piece is the same for both arms of an
// equal-time interferometer, so phase differences are unaffected while the
// per-arm value stays at a floating-point scale where differences survive.
// (Absolute single-arm phases are convention dependent anyway; the state
// definition drops an overall phase.) The internal-energy coupling is not
// part of the scalar phase: it is delivered through the elapsed proper time
// handed to the clock evolution. Proper time is carried as the deviation
// from coordinate time, again so that arm differences of order 1e-16 s/s
// survive in binary64.
struct PathPhase {
    double dynamical_phase;       // [rad], origin-referenced
    double coordinate_time;       // [s]
    double proper_time_deviation; // [s], tau - t along the arm

    double proper_time() const { return coordinate_time + proper_time_deviation; }
};

inline PathPhase path_phase(const Trajectory& traj, const InterferometerConfig& cfg) {
    const PhysicalConstants& k = cfg.constants;
    const double phi_origin = cfg.field.potential_at_origin(k);
    const double mc2 = cfg.mass * k.c2();
    const double mean_h = cfg.clock_initial.mean_energy(cfg.clock);

    double phase = 0.0;
    double t = 0.0;
    double dev = 0.0;
    for (const auto& seg : traj.segments) {
        if (seg.duration == 0.0) continue;
        const GrCorrections gr =
            gr_corrections(seg.height, seg.speed(), cfg.mass, mean_h, cfg.field, k);
        const LinearizedPotential lp = linearize_potential(cfg.field, seg.height, k);
        const double phi = lp.phi_origin + lp.delta_v;
        phase += seg.duration * (phi * (mc2 + gr.e_corr) - phi_origin * mc2) /
                 (k.hbar * k.c2());
        dev += seg.duration * tau_dot_deviation(phi, seg.speed(), k);
        t += seg.duration;
    }
    return {phase, t, dev};
}

struct InterferenceResult {
    double p_plus;             // detector probabilities, p_plus + p_minus = 1
    double p_minus;
    double visibility;         // fringe contrast in [0, 1]
    double distinguishability; // which-way information in [0, 1]
    double delta_phi;          // [rad] relative dynamical phase, arm 1 - arm 2
    double alpha;              // [rad] clock-overlap phase
    double delta_tau;          // [s] proper-time difference, arm 1 - arm 2
};

namespace detail {

// 1/2 Tr|rho_a - rho_b|
inline double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace detail

// Closed-form Mach-Zehnder detection statistics. Arm phases and proper-time
// deviations come from path_phase(); the clock branches are evolved by the
// deviations only, since the coordinate-time part is shared by the equal-time
// arms and cancels in the overlap, the detection probabilities and the trace
// distance. With the beam-splitter convention of an i on reflection,
//   P+- = 1/2 +- 1/2 |<tau1|tau2>| cos(dPhi + alpha + phase_shifter),
// the visibility equals the overlap modulus, and the distinguishability is
// the trace distance between the two evolved clock states (sqrt(1 - V^2) for
// a pure clock).
inline InterferenceResult interfere(const InterferometerConfig& cfg) {
    cfg.validate();
    const PhysicalConstants& k = cfg.constants;

    const PathPhase arm1 = path_phase(cfg.path1, cfg);
    const PathPhase arm2 = path_phase(cfg.path2, cfg);
    const double delta_phi = arm1.dynamical_phase - arm2.dynamical_phase;
    const double delta_tau = arm1.proper_time_deviation - arm2.proper_time_deviation;

    const ClockOverlap ov = evolved_overlap(cfg.clock_initial, cfg.clock,
                                            arm1.proper_time_deviation,
                                            arm2.proper_time_deviation, k);

    const double x = 0.5 * ov.modulus * std::cos(delta_phi + ov.phase_alpha + cfg.phase_shifter);

    double d;
    if (cfg.clock_initial.is_pure()) {
        d = std::sqrt(std::max(0.0, 1.0 - ov.modulus * ov.modulus));
    } else {
        const ClockState s1 = evolve(cfg.clock_initial, cfg.clock, arm1.proper_time_deviation, k);
        const ClockState s2 = evolve(cfg.clock_initial, cfg.clock, arm2.proper_time_deviation, k);
        d = detail::trace_distance(s1.density_matrix(), s2.density_matrix());
    }

    return {0.5 + x, 0.5 - x, ov.modulus, d, delta_phi, ov.phase_alpha, delta_tau};
}

// Visibility as a function of the arm proper-time difference and the clock's
// orthogonalization time:
//   V = |cos((delta_tau / t_perp) (pi/2))|.
// An infinite t_perp (a clock that never ticks) gives V = 1.
inline double visibility_from_dilation(double delta_tau, double t_perp) {
    if (std::isinf(t_perp) && t_perp > 0.0) return 1.0;
    if (!(t_perp > 0.0))
        throw std::domain_error("visibility_from_dilation: t_perp must be positive");
    return std::abs(std::cos(delta_tau / t_perp * (std::numbers::pi / 2.0)));
}

inline double visibility_from_dilation(double delta_tau, const OrthogonalizationTime& t) {
    if (!t.found()) return 1.0;
    return visibility_from_dilation(delta_tau, t.t_perp);
}

} // namespace mzclock
