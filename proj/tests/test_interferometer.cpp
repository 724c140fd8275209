#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mzclock/interferometer.hpp"
#include "mzclock/oracle.hpp"
#include "testutil.hpp"

using namespace mzclock;
using Catch::Approx;

namespace {

const PhysicalConstants k{};

FieldConfig planning_field() {
    FieldConfig f;
    f.g_override = 10.0;
    return f;
}

// hold geometry: arm 1 at delta_h, arm 2 at the origin
InterferometerConfig hold_config(double mass, ClockSpec spec, ClockState state,
                                 double delta_h, double delta_t, double phase = 0.0,
                                 FieldConfig field = planning_field()) {
    return InterferometerConfig{mass,
                                std::move(spec),
                                std::move(state),
                                Trajectory::hold(1, delta_t, delta_h),
                                Trajectory::hold(2, delta_t, 0.0),
                                phase,
                                field,
                                k};
}

// a field so weak the potential vanishes for all practical purposes
FieldConfig negligible_field() { return FieldConfig{1e-20, 1.0, std::nullopt}; }

} // namespace

TEST_CASE("gr_corrections: zero speed, zero potential") {
    const GrCorrections gr = gr_corrections(0.0, 0.0, 1.66e-27, 0.0, negligible_field(), k);
    CHECK(std::abs(gr.e_k) == 0.0);
    CHECK(std::abs(gr.e_corr) < 1e-50);
}

TEST_CASE("gr_corrections: potential term") {
    // synthetic source with phi(R) = -6.26e7 m^2/s^2
    FieldConfig f;
    f.source_radius = 1e7;
    f.source_mass = 6.26e7 * 1e7 / k.G;
    const double m = 1.66e-27;
    const GrCorrections gr = gr_corrections(0.0, 0.0, m, 0.0, f, k);
    CHECK(gr.e_corr == Approx(0.5 * m * (-6.26e7)).epsilon(1e-12));
    CHECK(gr.e_k == 0.0);
}

TEST_CASE("gr_corrections: kinetic term") {
    const double m = 1.66e-27, v = 500.0;
    const GrCorrections gr = gr_corrections(0.0, v, m, 0.0, negligible_field(), k);
    CHECK(gr.e_corr == Approx(-1.5 * m * v * v).epsilon(1e-12));
    CHECK(gr.e_k ==
          Approx(0.5 * m * v * v * (1.0 + 0.75 * v * v / k.c2())).epsilon(1e-12));

    // the internal energy reduces the kinetic term
    const double mean_h = 1e-25;
    const GrCorrections gr2 = gr_corrections(0.0, v, m, mean_h, negligible_field(), k);
    CHECK(gr2.e_k ==
          Approx(0.5 * m * v * v * (1.0 + 0.75 * v * v / k.c2() - mean_h / (m * k.c2())))
              .epsilon(1e-12));
}

TEST_CASE("gr_corrections: guards propagate") {
    FieldConfig f;
    CHECK_THROWS_AS(gr_corrections(0.0, 0.02 * k.c, 1e-27, 0.0, f, k), std::domain_error);
    CHECK_THROWS_AS(gr_corrections(1e5, 0.0, 1e-27, 0.0, f, k), std::domain_error);
}

TEST_CASE("path_phase: free space gives zero phase and the velocity correction") {
    const double v = 800.0, t = 2.0;
    InterferometerConfig cfg{1e-27,
                             ClockSpec::two_level(1e-20),
                             ClockState::balanced_superposition(2),
                             Trajectory::hold(1, t, 0.0, v),
                             Trajectory::hold(2, t, 0.0, v),
                             0.0,
                             negligible_field(),
                             k};
    const PathPhase pp = path_phase(cfg.path1, cfg);
    CHECK(std::abs(pp.dynamical_phase) < 1e-15);
    CHECK(pp.coordinate_time == t);
    CHECK(pp.proper_time() == Approx(t * std::sqrt(1.0 - v * v / k.c2())).epsilon(1e-14));
}

TEST_CASE("path_phase: hold segment reproduces the potential-difference phase") {
    const double m = 1e-30, dh = 1.0, dt = 1.0;
    const InterferometerConfig cfg = hold_config(
        m, ClockSpec::two_level(1e-25), ClockState::balanced_superposition(2), dh, dt);
    const PathPhase p1 = path_phase(cfg.path1, cfg);
    const PathPhase p2 = path_phase(cfg.path2, cfg);
    const double dv = 10.0 * dh;
    const double phi_r = cfg.field.potential_at_origin(k);
    // mean relativistic correction over the two arms; agreement is to the
    // next order in phi/c^2
    const double e_corr_bar = 0.5 * m * (phi_r + 0.5 * dv);
    const double expected = (m * k.c2() + e_corr_bar) * dv * dt / (k.hbar * k.c2());
    CHECK(p1.dynamical_phase - p2.dynamical_phase == Approx(expected).epsilon(1e-9));
}

TEST_CASE("path_phase: identical trajectories match exactly") {
    const InterferometerConfig cfg = hold_config(
        1e-30, ClockSpec::two_level(1e-25), ClockState::balanced_superposition(2), 1.0, 1.0);
    const PathPhase a = path_phase(cfg.path1, cfg);
    const PathPhase b = path_phase(cfg.path1, cfg);
    CHECK(a.dynamical_phase == b.dynamical_phase);
    CHECK(a.proper_time_deviation == b.proper_time_deviation);
}

TEST_CASE("interfere: energy eigenstate clock keeps full visibility") {
    for (double phase : {0.0, 0.7, 2.5}) {
        const InterferometerConfig cfg =
            hold_config(1e-30, ClockSpec::from_frequency(1.7975e16, k),
                        ClockState::energy_eigenstate(2, 0), 1.0, 1.0, phase);
        const InterferenceResult r = interfere(cfg);
        CHECK(r.visibility == Approx(1.0).epsilon(1e-14));
        CHECK(r.distinguishability < 1e-7);
        CHECK(r.p_plus ==
              Approx(0.5 + 0.5 * std::cos(r.delta_phi + r.alpha + phase)).margin(1e-14));
        CHECK(r.p_plus + r.p_minus == 1.0);
    }
}

TEST_CASE("interfere: full which-way information at delta_tau = t_perp") {
    // dE dV dT / (2 hbar c^2) = pi/2
    const double dv = 10.0, dt = 1.0;
    const double de = std::numbers::pi * k.hbar * k.c2() / (dv * dt);
    for (double phase : {0.0, 1.0, 4.4}) {
        const InterferometerConfig cfg = hold_config(
            1e-30, ClockSpec::two_level(de), ClockState::balanced_superposition(2), 1.0, dt,
            phase);
        const InterferenceResult r = interfere(cfg);
        CHECK(r.visibility < 1e-7);
        CHECK(r.distinguishability > 1.0 - 1e-7);
        CHECK(r.p_plus == Approx(0.5).margin(1e-7));
        CHECK(r.p_minus == Approx(0.5).margin(1e-7));
    }
}

TEST_CASE("interfere: revival at delta_tau = 2 t_perp") {
    // dE dV / (2 hbar c^2) = 1 Hz, dT = pi -> full revival
    const double dv = 10.0;
    const double de = 2.0 * k.hbar * k.c2() / dv;
    const InterferometerConfig cfg =
        hold_config(1e-33, ClockSpec::two_level(de), ClockState::balanced_superposition(2),
                    1.0, std::numbers::pi);
    const InterferenceResult r = interfere(cfg);
    CHECK(r.visibility == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interfere: degenerate clock reduces to the clockless interferometer") {
    const ClockSpec flat({0.0, 0.0});
    for (double phase : {0.0, 0.3, 1.9, 5.0}) {
        const InterferometerConfig cfg = hold_config(
            1e-31, flat, ClockState::balanced_superposition(2), 1.3, 0.8, phase);
        const InterferenceResult r = interfere(cfg);
        CHECK(r.visibility == 1.0);
        CHECK(r.alpha == 0.0);
        CHECK(r.p_plus == Approx(0.5 + 0.5 * std::cos(r.delta_phi + phase)).margin(1e-12));
    }
}

TEST_CASE("interfere: probabilities always sum to one") {
    std::mt19937 rng(41);
    testutil::RandomConfigOptions opt;
    opt.max_levels = 6;
    opt.allow_mixed = true;
    for (int i = 0; i < 100; ++i) {
        const InterferenceResult r = interfere(testutil::random_config(rng, opt));
        CHECK(r.p_plus + r.p_minus == 1.0);
        CHECK(r.p_plus >= 0.0);
        CHECK(r.p_minus >= 0.0);
    }
}

TEST_CASE("interfere: duality for pure clocks, inequality for mixed") {
    std::mt19937 rng(43);
    testutil::RandomConfigOptions pure_opt;
    pure_opt.max_levels = 8;
    for (int i = 0; i < 100; ++i) {
        const InterferenceResult r = interfere(testutil::random_config(rng, pure_opt));
        CHECK(std::abs(r.visibility * r.visibility +
                       r.distinguishability * r.distinguishability - 1.0) < 1e-10);
    }
    testutil::RandomConfigOptions mixed_opt;
    mixed_opt.max_levels = 8;
    mixed_opt.allow_mixed = true;
    for (int i = 0; i < 100; ++i) {
        const InterferenceResult r = interfere(testutil::random_config(rng, mixed_opt));
        CHECK(r.visibility * r.visibility + r.distinguishability * r.distinguishability <=
              1.0 + 1e-10);
    }
}

TEST_CASE("interfere: visibility depends on the paths only through delta_tau") {
    const ClockSpec spec = ClockSpec::two_level(2.9e-18);
    const ClockState state = ClockState::balanced_superposition(2);
    InterferometerConfig a{1e-31, spec, state,
                           {1, {{0.3, 1.2}, {0.7, 0.4}}},
                           {2, {{0.3, 0.0}, {0.7, 0.0}}},
                           0.4, planning_field(), k};
    InterferometerConfig b{1e-31, spec, state,
                           {1, {{0.7, 0.4}, {0.3, 1.2}}},
                           {2, {{0.7, 0.0}, {0.3, 0.0}}},
                           0.4, planning_field(), k};
    const InterferenceResult ra = interfere(a);
    const InterferenceResult rb = interfere(b);
    CHECK(ra.visibility == Approx(rb.visibility).margin(1e-12));
    CHECK(ra.delta_tau == Approx(rb.delta_tau).margin(1e-28));
    CHECK(ra.p_plus == Approx(rb.p_plus).margin(1e-12));
}

TEST_CASE("interfere: swapping arm labels negates the relative quantities") {
    std::mt19937 rng(47);
    testutil::RandomConfigOptions opt;
    opt.max_levels = 4;
    for (int i = 0; i < 20; ++i) {
        InterferometerConfig cfg = testutil::random_config(rng, opt);
        const InterferenceResult r = interfere(cfg);

        InterferometerConfig swapped = cfg;
        std::swap(swapped.path1, swapped.path2);
        swapped.phase_shifter = -cfg.phase_shifter;
        const InterferenceResult s = interfere(swapped);

        CHECK(s.delta_phi == -r.delta_phi);
        CHECK(s.delta_tau == -r.delta_tau);
        CHECK(std::cos(s.alpha) == Approx(std::cos(r.alpha)).margin(1e-12));
        CHECK(std::sin(s.alpha) == Approx(-std::sin(r.alpha)).margin(1e-12));
        // the detection statistics are invariant under the joint relabeling
        CHECK(s.p_plus == Approx(r.p_plus).margin(1e-12));
        CHECK(s.visibility == Approx(r.visibility).margin(1e-12));
    }
}

TEST_CASE("interfere: asymmetric arms are rejected") {
    const ClockSpec spec = ClockSpec::two_level(1e-20);
    const ClockState state = ClockState::balanced_superposition(2);
    InterferometerConfig bad_duration{1e-30, spec, state,
                                      Trajectory::hold(1, 1.0, 1.0),
                                      Trajectory::hold(2, 1.1, 0.0),
                                      0.0, planning_field(), k};
    CHECK_THROWS_AS(interfere(bad_duration), std::invalid_argument);

    InterferometerConfig bad_speed{1e-30, spec, state,
                                   Trajectory::hold(1, 1.0, 1.0, 100.0),
                                   Trajectory::hold(2, 1.0, 0.0, 90.0),
                                   0.0, planning_field(), k};
    CHECK_THROWS_AS(interfere(bad_speed), std::invalid_argument);

    InterferometerConfig bad_mass{-1.0, spec, state,
                                  Trajectory::hold(1, 1.0, 1.0),
                                  Trajectory::hold(2, 1.0, 0.0),
                                  0.0, planning_field(), k};
    CHECK_THROWS_AS(interfere(bad_mass), std::invalid_argument);
}

TEST_CASE("visibility_from_dilation: anchor points") {
    const double t_perp = 3.2e-15;
    CHECK(visibility_from_dilation(0.0, t_perp) == 1.0);
    CHECK(visibility_from_dilation(t_perp, t_perp) == Approx(0.0).margin(1e-15));
    CHECK(visibility_from_dilation(2.0 * t_perp, t_perp) == Approx(1.0).epsilon(1e-15));
    CHECK(visibility_from_dilation(1.0, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK_THROWS_AS(visibility_from_dilation(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(visibility_from_dilation(1.0, -2.0), std::domain_error);

    const OrthogonalizationTime never{OrthogonalizationTime::Kind::never, 0.0,
                                      std::numeric_limits<double>::infinity()};
    CHECK(visibility_from_dilation(1.0, never) == 1.0);
    const OrthogonalizationTime found{OrthogonalizationTime::Kind::found, t_perp, t_perp};
    CHECK(visibility_from_dilation(t_perp, found) == Approx(0.0).margin(1e-15));
}

TEST_CASE("oracle: matches interfere for eigenstate clocks") {
    const InterferometerConfig cfg =
        hold_config(1e-30, ClockSpec::from_frequency(1.7975e16, k),
                    ClockState::energy_eigenstate(2, 1), 1.0, 1.0, 0.9);
    const InterferenceResult a = interfere(cfg);
    const InterferenceResult b = brute_force_oracle(cfg);
    CHECK(b.visibility == Approx(1.0).epsilon(1e-9));
    CHECK(b.p_plus == Approx(a.p_plus).margin(1e-9));
    CHECK(b.p_minus == Approx(a.p_minus).margin(1e-9));
}

TEST_CASE("oracle: random pure and mixed configurations") {
    std::mt19937 rng(53);
    testutil::RandomConfigOptions opt;
    opt.max_levels = 8;
    opt.allow_mixed = true;
    for (int i = 0; i < 40; ++i) {
        const InterferometerConfig cfg = testutil::random_config(rng, opt);
        const InterferenceResult a = interfere(cfg);
        const InterferenceResult b = brute_force_oracle(cfg);
        CHECK(b.p_plus == Approx(a.p_plus).margin(1e-9));
        CHECK(b.p_minus == Approx(a.p_minus).margin(1e-9));
        CHECK(b.visibility == Approx(a.visibility).margin(1e-9));
        CHECK(b.distinguishability == Approx(a.distinguishability).margin(1e-9));
    }
}

TEST_CASE("oracle: maximally mixed clock") {
    const double dv = 10.0;
    const double de = 2.0 * k.hbar * k.c2() / dv; // 1 Hz overlap frequency
    const InterferometerConfig cfg = hold_config(
        1e-33, ClockSpec::two_level(de), ClockState::maximally_mixed(2), 1.0, 0.7, 0.2);
    const InterferenceResult a = interfere(cfg);
    const InterferenceResult b = brute_force_oracle(cfg);
    CHECK(b.visibility == Approx(std::abs(std::cos(0.7))).margin(1e-9));
    CHECK(b.visibility == Approx(a.visibility).margin(1e-9));
    // the maximally mixed state is invariant under the evolution
    CHECK(b.distinguishability < 1e-12);
}

TEST_CASE("oracle: dimension cap") {
    std::vector<double> energies(17);
    for (int i = 0; i < 17; ++i) energies[static_cast<std::size_t>(i)] = i * 1e-21;
    const InterferometerConfig cfg =
        hold_config(1e-30, ClockSpec(energies), ClockState::balanced_superposition(17), 1.0,
                    1.0);
    CHECK_THROWS_AS(brute_force_oracle(cfg), std::invalid_argument);
}
