#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mzclock/clock.hpp"
#include "mzclock/interferometer.hpp"

namespace mzclock {

namespace detail {

// One pure clock branch pair just before the recombining splitter, phase
// shifter excluded. Includes the first splitter's 1/sqrt(2) and the i picked
// up on reflection into arm 1.
struct BranchPair {
    double weight;
    Eigen::VectorXcd arm1;
    Eigen::VectorXcd arm2;
};

inline constexpr int oracle_phase_grid = 10000;

// Golden-section extremum refinement of a smooth scalar function on [lo, hi].
template <typename F>
double refine_extremum(F&& f, double lo, double hi, bool maximize) {
    constexpr double invphi = 0.6180339887498949;
    const double sign = maximize ? -1.0 : 1.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = sign * f(x1);
    double f2 = sign * f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = sign * f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = sign * f(x2);
        }
    }
    return f(0.5 * (a + b));
}

} // namespace detail

// Independent verification route for interfere(): propagates the explicit
// 2N-dimensional joint path (x) clock state through the interferometer and
// reads the visibility off a dense sweep of the controllable phase,
//   V = (max_phi P - min_phi P) / (max_phi P + min_phi P),
// instead of using the overlap closed form. A mixed clock is handled as a
// convex combination over the eigenstates of its density operator. Branch
// phases and clock times are referenced to arm 2: a phase factor or clock
// rotation shared by both branches leaves every detection probability
// invariant, and the reference keeps the trigonometric arguments small.
inline InterferenceResult brute_force_oracle(const InterferometerConfig& cfg) {
    cfg.validate();
    const PhysicalConstants& k = cfg.constants;
    const int n = cfg.clock.dimension();
    if (n > 16)
        throw std::invalid_argument("brute_force_oracle: clock dimension capped at 16");

    const PathPhase arm1 = path_phase(cfg.path1, cfg);
    const PathPhase arm2 = path_phase(cfg.path2, cfg);
    const double delta_phi = arm1.dynamical_phase - arm2.dynamical_phase;
    const double delta_tau = arm1.proper_time_deviation - arm2.proper_time_deviation;

    // Pure decomposition of the initial clock state.
    std::vector<std::pair<double, Eigen::VectorXcd>> ensemble;
    if (cfg.clock_initial.is_pure()) {
        ensemble.emplace_back(1.0, cfg.clock_initial.amplitudes());
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cfg.clock_initial.rho());
        for (int i = 0; i < n; ++i) {
            const double w = es.eigenvalues()[i];
            if (w > 1e-14) ensemble.emplace_back(w, es.eigenvectors().col(i));
        }
    }

    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const complexd unit_i(0.0, 1.0);

    std::vector<detail::BranchPair> branches;
    branches.reserve(ensemble.size());
    for (const auto& [w, chi] : ensemble) {
        detail::BranchPair bp;
        bp.weight = w;
        bp.arm1.resize(n);
        bp.arm2.resize(n);
        for (int m = 0; m < n; ++m) {
            const double clock_phase = cfg.clock.energy(m) * delta_tau / k.hbar;
            bp.arm1[m] = unit_i * inv_sqrt2 * std::polar(1.0, -delta_phi - clock_phase) * chi[m];
            bp.arm2[m] = inv_sqrt2 * chi[m];
        }
        branches.push_back(std::move(bp));
    }

    // Recombining splitter (same i-on-reflection convention) and projection
    // onto the detector ports.
    auto p_plus_at = [&](double phi) {
        const complexd ps = std::polar(1.0, phi);
        double p = 0.0;
        for (const auto& bp : branches) {
            double acc = 0.0;
            for (int m = 0; m < n; ++m)
                acc += std::norm(inv_sqrt2 * (bp.arm1[m] + unit_i * ps * bp.arm2[m]));
            p += bp.weight * acc;
        }
        return p;
    };
    auto p_minus_at = [&](double phi) {
        const complexd ps = std::polar(1.0, phi);
        double p = 0.0;
        for (const auto& bp : branches) {
            double acc = 0.0;
            for (int m = 0; m < n; ++m)
                acc += std::norm(inv_sqrt2 * (unit_i * bp.arm1[m] + ps * bp.arm2[m]));
            p += bp.weight * acc;
        }
        return p;
    };

    const double p_plus = p_plus_at(cfg.phase_shifter);
    const double p_minus = p_minus_at(cfg.phase_shifter);

    // Fringe amplitude from the definition: sweep the controllable phase.
    const double span = 2.0 * std::numbers::pi;
    const double step = span / detail::oracle_phase_grid;
    double best_max = -1.0, best_min = 2.0;
    double arg_max = 0.0, arg_min = 0.0;
    for (int i = 0; i < detail::oracle_phase_grid; ++i) {
        const double phi = i * step;
        const double p = p_plus_at(phi);
        if (p > best_max) { best_max = p; arg_max = phi; }
        if (p < best_min) { best_min = p; arg_min = phi; }
    }
    best_max = detail::refine_extremum(p_plus_at, arg_max - step, arg_max + step, true);
    best_min = detail::refine_extremum(p_plus_at, arg_min - step, arg_min + step, false);
    const double visibility = (best_max - best_min) / (best_max + best_min);

    // Which-way information from the explicitly evolved clock ensembles.
    Eigen::MatrixXcd rho1 = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd rho2 = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [w, chi] : ensemble) {
        Eigen::VectorXcd u1(n), u2(n);
        for (int m = 0; m < n; ++m) {
            const double clock_phase = cfg.clock.energy(m) * delta_tau / k.hbar;
            u1[m] = std::polar(1.0, -clock_phase) * chi[m];
            u2[m] = chi[m];
        }
        rho1 += w * (u1 * u1.adjoint());
        rho2 += w * (u2 * u2.adjoint());
    }
    const double distinguishability = detail::trace_distance(rho1, rho2);

    // Cross term between the branches, for the overlap phase: the branch
    // blocks satisfy X = (-i/2) e^{i dPhi} <tau1|tau2>.
    complexd cross = 0.0;
    for (const auto& bp : branches)
        cross += bp.weight * bp.arm1.dot(bp.arm2);
    double alpha = 0.0;
    if (std::abs(cross) > 0.0) {
        alpha = std::arg(unit_i * cross * std::polar(1.0, -delta_phi));
        if (alpha <= -std::numbers::pi) alpha += 2.0 * std::numbers::pi;
    }

    return {p_plus, p_minus, visibility, distinguishability, delta_phi, alpha, delta_tau};
}

} // namespace mzclock
