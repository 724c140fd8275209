#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mzclock/constants.hpp"

namespace mzclock {

using complexd = std::complex<double>;

// Internal Hamiltonian given by its energy spectrum, diagonal in the level
// basis. Energies are ascending, so energies().front() is the ground energy.
class ClockSpec {
public:
    explicit ClockSpec(std::vector<double> energies) : energies_(std::move(energies)) {
        if (energies_.empty())
            throw std::invalid_argument("ClockSpec: at least one level required");
        for (double e : energies_)
            if (!std::isfinite(e))
                throw std::invalid_argument("ClockSpec: energies must be finite");
        if (!std::is_sorted(energies_.begin(), energies_.end()))
            throw std::invalid_argument("ClockSpec: energies must be sorted ascending");
    }

    static ClockSpec two_level(double level_gap, double ground_energy = 0.0) {
        if (!(level_gap >= 0.0))
            throw std::invalid_argument("ClockSpec: level gap must be >= 0");
        return ClockSpec({ground_energy, ground_energy + level_gap});
    }

    // Two-level clock of angular frequency omega = (E1 - E0)/hbar.
    static ClockSpec from_frequency(double omega, const PhysicalConstants& k) {
        if (!(omega >= 0.0))
            throw std::invalid_argument("ClockSpec: frequency must be >= 0");
        return two_level(k.hbar * omega);
    }

    int dimension() const { return static_cast<int>(energies_.size()); }
    double energy(int n) const { return energies_.at(static_cast<std::size_t>(n)); }
    double ground_energy() const { return energies_.front(); }
    const std::vector<double>& energies() const { return energies_; }

    double level_gap() const {
        if (dimension() != 2)
            throw std::logic_error("ClockSpec::level_gap: spec is not two-level");
        return energies_[1] - energies_[0];
    }

private:
    std::vector<double> energies_;
};

namespace detail {

inline constexpr double state_tol = 1e-12;
inline constexpr double psd_tol = 1e-10;

inline void check_density_matrix(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument("ClockState: density matrix must be square");
    if (!rho.allFinite())
        throw std::invalid_argument("ClockState: density matrix must be finite");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > state_tol)
        throw std::invalid_argument("ClockState: density matrix not Hermitian within 1e-12");
    if (std::abs(rho.trace().real() - 1.0) > state_tol || std::abs(rho.trace().imag()) > state_tol)
        throw std::invalid_argument("ClockState: density matrix trace must be 1 within 1e-12");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol)
        throw std::invalid_argument("ClockState: density matrix has eigenvalue < -1e-10");
}

} // namespace detail

// State of the internal degree of freedom: a unit vector of level amplitudes
// or an N x N density operator.
class ClockState {
public:
    enum class Kind { pure, mixed };

    static ClockState pure(Eigen::VectorXcd amplitudes) {
        if (amplitudes.size() < 1)
            throw std::invalid_argument("ClockState: empty amplitude vector");
        if (!amplitudes.allFinite())
            throw std::invalid_argument("ClockState: amplitudes must be finite");
        if (std::abs(amplitudes.norm() - 1.0) > detail::state_tol)
            throw std::invalid_argument("ClockState: pure state must have unit norm within 1e-12");
        ClockState s;
        s.kind_ = Kind::pure;
        s.amplitudes_ = std::move(amplitudes);
        return s;
    }

    static ClockState mixed(Eigen::MatrixXcd rho) {
        detail::check_density_matrix(rho);
        ClockState s;
        s.kind_ = Kind::mixed;
        s.rho_ = std::move(rho);
        return s;
    }

    // (|0> + |1> + ... + |n-1>)/sqrt(n)
    static ClockState balanced_superposition(int dimension) {
        if (dimension < 1) throw std::invalid_argument("ClockState: dimension must be >= 1");
        Eigen::VectorXcd a = Eigen::VectorXcd::Constant(
            dimension, complexd(1.0 / std::sqrt(static_cast<double>(dimension)), 0.0));
        return pure(std::move(a));
    }

    static ClockState energy_eigenstate(int dimension, int level) {
        if (dimension < 1) throw std::invalid_argument("ClockState: dimension must be >= 1");
        if (level < 0 || level >= dimension)
            throw std::invalid_argument("ClockState: eigenstate level out of range");
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dimension);
        a[level] = 1.0;
        return pure(std::move(a));
    }

    static ClockState maximally_mixed(int dimension) {
        if (dimension < 1) throw std::invalid_argument("ClockState: dimension must be >= 1");
        return mixed(Eigen::MatrixXcd::Identity(dimension, dimension) /
                     static_cast<double>(dimension));
    }

    Kind kind() const { return kind_; }
    bool is_pure() const { return kind_ == Kind::pure; }

    int dimension() const {
        return static_cast<int>(is_pure() ? amplitudes_.size() : rho_.rows());
    }

    const Eigen::VectorXcd& amplitudes() const {
        if (!is_pure()) throw std::logic_error("ClockState: mixed state has no amplitude vector");
        return amplitudes_;
    }

    const Eigen::MatrixXcd& rho() const {
        if (is_pure()) throw std::logic_error("ClockState: pure state stored as amplitudes; use density_matrix()");
        return rho_;
    }

    Eigen::MatrixXcd density_matrix() const {
        if (is_pure()) return amplitudes_ * amplitudes_.adjoint();
        return rho_;
    }

    // Level occupation probabilities p_n.
    Eigen::VectorXd populations() const {
        if (is_pure()) return amplitudes_.cwiseAbs2();
        return rho_.diagonal().real();
    }

    double mean_energy(const ClockSpec& spec) const {
        if (spec.dimension() != dimension())
            throw std::invalid_argument("ClockState: state/spec dimension mismatch");
        const Eigen::VectorXd p = populations();
        double e = 0.0;
        for (int n = 0; n < dimension(); ++n) e += p[n] * spec.energy(n);
        return e;
    }

private:
    ClockState() = default;
    Kind kind_ = Kind::pure;
    Eigen::VectorXcd amplitudes_;
    Eigen::MatrixXcd rho_;
};

// Free evolution for elapsed proper time tau: amplitudes pick up
// exp(-i E_n tau / hbar); a density operator maps to U rho U^dag with
// U = diag(exp(-i E_n tau / hbar)). Diagonal entries are untouched, so norm,
// trace and Hermiticity are preserved exactly up to rounding.
inline ClockState evolve(const ClockState& state, const ClockSpec& spec, double tau,
                         const PhysicalConstants& k) {
    if (state.dimension() != spec.dimension())
        throw std::invalid_argument("evolve: state/spec dimension mismatch");
    const int n = spec.dimension();
    if (state.is_pure()) {
        Eigen::VectorXcd a = state.amplitudes();
        for (int i = 0; i < n; ++i)
            a[i] *= std::polar(1.0, -spec.energy(i) * tau / k.hbar);
        return ClockState::pure(std::move(a));
    }
    Eigen::MatrixXcd r = state.rho();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                r(i, j) *= std::polar(1.0, -(spec.energy(i) - spec.energy(j)) * tau / k.hbar);
    return ClockState::mixed(std::move(r));
}

// Modulus and phase of an interference cross term, phase in (-pi, pi].
struct ClockOverlap {
    double modulus;
    double phase_alpha;
};

namespace detail {

inline ClockOverlap to_overlap(complexd z) {
    double m = std::abs(z);
    m = std::min(m, 1.0); // rounding can overshoot by ~1e-16
    double a = (m == 0.0) ? 0.0 : std::arg(z);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return {m, a};
}

} // namespace detail

// <a|b> for two pure states. Mixed operands are rejected: the interference
// functional for mixed clocks is defined relative to a common initial state,
// see evolved_overlap().
inline ClockOverlap overlap(const ClockState& a, const ClockState& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("overlap: dimension mismatch");
    if (!a.is_pure() || !b.is_pure())
        throw std::invalid_argument(
            "overlap: mixed states require a common initial state; use evolved_overlap()");
    return detail::to_overlap(a.amplitudes().dot(b.amplitudes()));
}

// Interference cross term between the two branches of one initial state
// evolved for proper times tau_a and tau_b:
//   Tr(rho U(tau_a)^dag U(tau_b)) = sum_n p_n exp(-i E_n (tau_b - tau_a)/hbar).
// For a pure initial state this equals <a|b> of the evolved pair. Only the
// time difference enters, so any evolution shared by both branches drops out.
inline ClockOverlap evolved_overlap(const ClockState& initial, const ClockSpec& spec,
                                    double tau_a, double tau_b, const PhysicalConstants& k) {
    if (initial.dimension() != spec.dimension())
        throw std::invalid_argument("evolved_overlap: state/spec dimension mismatch");
    const Eigen::VectorXd p = initial.populations();
    const double dt = tau_b - tau_a;
    complexd z = 0.0;
    for (int n = 0; n < spec.dimension(); ++n)
        z += p[n] * std::polar(1.0, -spec.energy(n) * dt / k.hbar);
    // populations of a unit state sum to 1; dividing out the rounding residue
    // keeps the coincident-time overlap exactly 1
    z /= p.sum();
    return detail::to_overlap(z);
}

// Result of the first-orthogonalization search. `never` is an analytic
// verdict (the overlap modulus is provably bounded away from zero for all
// times); `window_exhausted` only says no root was found up to
// `searched_up_to`, which is then a lower bound on t_perp.
struct OrthogonalizationTime {
    enum class Kind { found, never, window_exhausted };

    Kind kind = Kind::never;
    double t_perp = 0.0;          // first orthogonalization time [s], valid when found
    double searched_up_to = 0.0;  // lower bound on t_perp otherwise (inf when never)

    bool found() const { return kind == Kind::found; }

    // 1/t_perp when the state orthogonalizes, 0 otherwise.
    double inverse_or_zero() const { return found() ? 1.0 / t_perp : 0.0; }
};

// Search parameters. The overlap modulus is a finite trigonometric sum in
// the level populations, so a dense grid at pi/(50 w_max) plus golden-section
// refinement of candidate minima locates every transversal zero.
inline constexpr double orthogonality_modulus_tol = 1e-9;
inline constexpr double orthogonality_window_periods = 1e4;
inline constexpr int orthogonality_grid_per_half_period = 50;

namespace detail {

struct OccupiedLevel {
    double population;
    double frequency; // (E_n - E_lowest_occupied)/hbar >= 0
};

// |sum_n p_n exp(-i nu_n tau)|^2
inline double overlap_sq(const std::vector<OccupiedLevel>& levels, double tau) {
    complexd z = 0.0;
    for (const auto& l : levels) z += l.population * std::polar(1.0, -l.frequency * tau);
    return std::norm(z);
}

// Golden-section minimization of overlap_sq on [lo, hi].
inline std::pair<double, double> refine_minimum(const std::vector<OccupiedLevel>& levels,
                                                double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = overlap_sq(levels, x1);
    double f2 = overlap_sq(levels, x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = overlap_sq(levels, x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = overlap_sq(levels, x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, overlap_sq(levels, xm)};
}

// Approximate common divisor of the positive frequencies, or 0 when the
// spectrum is not commensurate within the tolerance.
inline double frequency_gcd(const std::vector<OccupiedLevel>& levels, double rel_tol) {
    double g = 0.0;
    for (const auto& l : levels) {
        double a = l.frequency;
        if (a <= 0.0) continue;
        if (g == 0.0) { g = a; continue; }
        double b = g;
        while (b > rel_tol * l.frequency) {
            const double r = std::fmod(a, b);
            a = b;
            b = (r > 0.5 * b) ? b - r : r; // fold toward the nearer multiple
        }
        g = a;
        if (g <= 0.0) return 0.0;
    }
    return g;
}

} // namespace detail

// First proper time at which the evolved state becomes orthogonal to the
// initial one (overlap modulus below `orthogonality_modulus_tol`). Only the
// level populations enter. A balanced pair of occupied levels has the closed
// form pi hbar / dE; anything with a dominant population can never reach
// zero, since |overlap| >= 2 p_max - 1 for all times. The general case scans
// up to 10^4 periods of the smallest Bohr frequency. For a spectrum that is
// commensurate within floating-point tolerance the scan covers one full
// period and extends the verdict over the window by bounding the modulus
// drift per period.
inline OrthogonalizationTime orthogonalization_time(const ClockState& state,
                                                    const ClockSpec& spec,
                                                    const PhysicalConstants& k) {
    if (state.dimension() != spec.dimension())
        throw std::invalid_argument("orthogonalization_time: state/spec dimension mismatch");

    constexpr double inf = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd p = state.populations();

    std::vector<detail::OccupiedLevel> levels;
    double e_ref = 0.0;
    for (int n = 0; n < spec.dimension(); ++n) {
        if (p[n] > 1e-15) {
            if (levels.empty()) e_ref = spec.energy(n);
            const double nu = (spec.energy(n) - e_ref) / k.hbar;
            // degenerate levels act as one
            if (!levels.empty() && nu == levels.back().frequency)
                levels.back().population += p[n];
            else
                levels.push_back({p[n], nu});
        }
    }

    // Energy eigenstates (one occupied frequency) never tick.
    if (levels.size() < 2) return {OrthogonalizationTime::Kind::never, 0.0, inf};

    double p_max = 0.0, p_sum = 0.0;
    for (const auto& l : levels) { p_max = std::max(p_max, l.population); p_sum += l.population; }
    if (2.0 * p_max - p_sum > orthogonality_modulus_tol)
        return {OrthogonalizationTime::Kind::never, 0.0, inf};

    if (levels.size() == 2 && std::abs(levels[0].population - levels[1].population) <= 1e-12) {
        const double t = std::numbers::pi / levels[1].frequency;
        return {OrthogonalizationTime::Kind::found, t, t};
    }

    double omega_max = 0.0;
    double omega_min_gap = inf;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        omega_max = std::max(omega_max, levels[i].frequency);
        for (std::size_t j = i + 1; j < levels.size(); ++j) {
            const double gap = std::abs(levels[j].frequency - levels[i].frequency);
            if (gap > 0.0) omega_min_gap = std::min(omega_min_gap, gap);
        }
    }
    const double window =
        orthogonality_window_periods * 2.0 * std::numbers::pi / omega_min_gap;
    const double step =
        std::numbers::pi / (orthogonality_grid_per_half_period * omega_max);
    const double thr_sq = orthogonality_modulus_tol * orthogonality_modulus_tol;
    // a grid point adjacent to a transversal zero satisfies |overlap| <= w_max * step
    const double candidate_sq = 2.0 * omega_max * step * (2.0 * omega_max * step);

    const double base = detail::frequency_gcd(levels, 1e-9);
    double scan_end = window;
    double period = 0.0;
    if (base > 0.0) {
        period = 2.0 * std::numbers::pi / base;
        scan_end = std::min(window, period * (1.0 + 1e-9) + step);
    }

    double prev2 = detail::overlap_sq(levels, 0.0);
    double prev1 = detail::overlap_sq(levels, step);
    double min_seen = std::min(prev2, prev1);
    for (double t = 2.0 * step; t <= scan_end; t += step) {
        const double cur = detail::overlap_sq(levels, t);
        min_seen = std::min(min_seen, cur);
        if (prev1 <= prev2 && prev1 <= cur && prev1 < candidate_sq) {
            auto [tm, fm] = detail::refine_minimum(levels, t - 2.0 * step, t);
            min_seen = std::min(min_seen, fm);
            if (fm < thr_sq)
                return {OrthogonalizationTime::Kind::found, tm, tm};
        }
        prev2 = prev1;
        prev1 = cur;
    }

    if (period > 0.0 && scan_end < window) {
        // One full period scanned. Bound the modulus drift of the periodic
        // continuation over the remaining window before ruling the window out.
        double residual = 0.0;
        for (const auto& l : levels) {
            const double m = std::round(l.frequency / base);
            residual += l.population * std::abs(l.frequency * period - 2.0 * std::numbers::pi * m);
        }
        const double repeats = std::ceil(window / period);
        const double drift = repeats * residual;
        if (std::sqrt(min_seen) - drift > orthogonality_modulus_tol)
            return {OrthogonalizationTime::Kind::window_exhausted, 0.0, window};
        // Inconclusive: fall through to the full window.
        for (double t = scan_end; t <= window; t += step) {
            const double cur = detail::overlap_sq(levels, t);
            if (prev1 <= prev2 && prev1 <= cur && prev1 < candidate_sq) {
                auto [tm, fm] = detail::refine_minimum(levels, t - 2.0 * step, t);
                if (fm < thr_sq)
                    return {OrthogonalizationTime::Kind::found, tm, tm};
            }
            prev2 = prev1;
            prev1 = cur;
        }
    }

    return {OrthogonalizationTime::Kind::window_exhausted, 0.0, window};
}

// Moment bound on the ticking rate:
//   1/t_perp <= 2^(1/alpha)/(pi hbar) * <(H - E_gr)^alpha>^(1/alpha),  alpha > 0,
// with the expectation over the level populations. Saturated by a balanced
// two-level state for alpha in {1/2, 1, 2}.
inline double orthogonalization_bound(const ClockState& state, const ClockSpec& spec,
                                      double alpha, const PhysicalConstants& k) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("orthogonalization_bound: alpha must be > 0");
    if (state.dimension() != spec.dimension())
        throw std::invalid_argument("orthogonalization_bound: state/spec dimension mismatch");
    const Eigen::VectorXd p = state.populations();
    const double e_gr = spec.ground_energy();
    double moment = 0.0;
    for (int n = 0; n < spec.dimension(); ++n) {
        const double de = std::max(0.0, spec.energy(n) - e_gr);
        if (p[n] > 0.0 && de > 0.0) moment += p[n] * std::pow(de, alpha);
    }
    if (moment == 0.0) return 0.0;
    return std::pow(2.0, 1.0 / alpha) / (std::numbers::pi * k.hbar) *
           std::pow(moment, 1.0 / alpha);
}

// Tightest bound over a caller-supplied set of moment orders.
inline double orthogonalization_bound_min(const ClockState& state, const ClockSpec& spec,
                                          std::span<const double> alphas,
                                          const PhysicalConstants& k) {
    if (alphas.empty())
        throw std::invalid_argument("orthogonalization_bound_min: empty alpha set");
    double best = std::numeric_limits<double>::infinity();
    for (double a : alphas)
        best = std::min(best, orthogonalization_bound(state, spec, a, k));
    return best;
}

} // namespace mzclock
