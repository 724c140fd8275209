// Command-line front end: single runs, parameter sweeps, experiment planning,
// outcome classification and clock bound reports.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mzclock/mzclock.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse_error = 2;
constexpr int exit_domain_error = 3;
constexpr int exit_unknown_system = 4;

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw mzclock::ConfigError("cannot open output file '" + path + "'");
        stream = &file;
    }
    std::ostream& out() { return *stream; }
};

struct Options {
    std::string config_path;
    std::string output_path;
    std::string format = "text";
    std::string catalog_path;
    bool verify = false;

    // simulate/sweep
    std::string sweep_var;
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    long sweep_samples = 0;

    // plan
    std::string system_name;
    std::optional<double> plan_omega;
    std::optional<double> plan_achieved;
    double plan_g = mzclock::planning_gravity;

    // classify
    double v_measured = 0.0;
    double v_qm = 0.0;
    double visibility_error = 0.0;
    double delta_tau = 0.0;

    // bounds
    std::optional<double> bounds_omega;
    std::vector<double> bounds_energies;
    std::string bounds_state = "balanced";
    std::vector<double> alphas{0.5, 1.0, 2.0};
};

int run_simulate(const Options& opt) {
    const mzclock::RunConfig rc = mzclock::load_run_config(opt.config_path);
    const mzclock::InterferometerConfig cfg = rc.build();
    const mzclock::InterferenceResult r = mzclock::interfere(cfg);
    std::optional<double> oracle_v;
    if (opt.verify) oracle_v = mzclock::brute_force_oracle(cfg).visibility;

    OutputTarget target;
    target.open(opt.output_path);
    if (opt.format == "json") {
        nlohmann::json j;
        j["config"] = mzclock::run_config_to_json(rc);
        j["result"] = mzclock::result_to_json(r);
        if (oracle_v) j["result"]["visibility_oracle"] = *oracle_v;
        target.out() << j.dump(2) << "\n";
    } else if (opt.format == "csv") {
        target.out() << mzclock::result_csv_header(opt.verify) << "\n";
        mzclock::render_result_csv_row(r, target.out(), oracle_v);
    } else {
        mzclock::render_result_text(r, target.out());
        if (oracle_v)
            target.out() << "visibility (oracle)  = " << mzclock::format_g(*oracle_v) << "\n";
    }
    return exit_ok;
}

int run_sweep_cmd(const Options& opt) {
    const mzclock::RunConfig rc = mzclock::load_run_config(opt.config_path);
    const mzclock::SweepVariable var = mzclock::parse_sweep_variable(opt.sweep_var);
    const mzclock::SweepSpec spec{var, opt.sweep_from, opt.sweep_to, opt.sweep_samples};
    const std::vector<mzclock::SweepRow> rows = mzclock::run_sweep(rc, spec, opt.verify);

    OutputTarget target;
    target.open(opt.output_path);
    if (opt.format == "json") {
        nlohmann::json j = mzclock::sweep_to_json(rows, var);
        j["config"] = mzclock::run_config_to_json(rc);
        target.out() << j.dump(2) << "\n";
    } else {
        mzclock::render_sweep_csv(rows, var, opt.verify, target.out());
    }
    return exit_ok;
}

int run_plan(const Options& opt) {
    std::vector<mzclock::SystemCatalogEntry> catalog =
        opt.catalog_path.empty() ? mzclock::builtin_catalog()
                                 : mzclock::load_catalog_file(opt.catalog_path);
    const mzclock::PhysicalConstants k;

    mzclock::SystemCatalogEntry entry;
    if (opt.plan_omega) {
        entry.name = "custom";
        entry.clock_mechanism = "user supplied";
        entry.omega = *opt.plan_omega;
        entry.achieved_dhdt = opt.plan_achieved.value_or(0.0);
    } else {
        auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const auto& e) { return e.name == opt.system_name; });
        if (it == catalog.end()) {
            std::cerr << "unknown system '" << opt.system_name << "'; available:";
            for (const auto& e : catalog) std::cerr << ' ' << e.name;
            std::cerr << "\n";
            return exit_unknown_system;
        }
        entry = *it;
        if (opt.plan_achieved) entry.achieved_dhdt = *opt.plan_achieved;
    }

    OutputTarget target;
    target.open(opt.output_path);
    if (!(entry.achieved_dhdt > 0.0)) {
        // nothing achieved to compare against: report the requirement alone
        const double req = mzclock::required_dhdt(entry.omega, opt.plan_g, k);
        if (opt.format == "json") {
            nlohmann::json j;
            j["system"] = entry.name;
            j["omega_hz"] = entry.omega;
            j["g_m_per_s2"] = opt.plan_g;
            j["required_dhdt_ms"] = req;
            target.out() << j.dump(2) << "\n";
        } else {
            target.out() << "required dh*dT = " << mzclock::format_g(req) << " m s (omega = "
                         << mzclock::format_g(entry.omega) << " Hz, g = "
                         << mzclock::format_g(opt.plan_g) << " m/s^2)\n";
        }
        return exit_ok;
    }

    const mzclock::FeasibilityReport rep = mzclock::feasibility_report(entry, opt.plan_g, k);
    if (opt.format == "json")
        target.out() << mzclock::feasibility_to_json(entry, rep, opt.plan_g).dump(2) << "\n";
    else
        mzclock::render_feasibility_text(entry, rep, opt.plan_g, target.out());
    return exit_ok;
}

int run_classify(const Options& opt) {
    const mzclock::OutcomeClassification c = mzclock::classify_outcome(
        opt.v_measured, opt.v_qm, opt.visibility_error, opt.delta_tau);
    OutputTarget target;
    target.open(opt.output_path);
    if (opt.format == "json")
        target.out() << mzclock::classification_to_json(c).dump(2) << "\n";
    else
        mzclock::render_classification_text(c, target.out());
    return exit_ok;
}

int run_bounds(const Options& opt) {
    const mzclock::PhysicalConstants k;

    std::optional<mzclock::ClockSpec> spec;
    std::optional<mzclock::ClockState> state;
    if (!opt.config_path.empty()) {
        const mzclock::RunConfig rc = mzclock::load_run_config(opt.config_path);
        spec = rc.build_clock();
        state = rc.clock_state.build(spec->dimension());
    } else {
        if (opt.bounds_omega && !opt.bounds_energies.empty())
            throw mzclock::ConfigError("bounds: give either --omega or --energies, not both");
        if (opt.bounds_omega)
            spec = mzclock::ClockSpec::from_frequency(*opt.bounds_omega, k);
        else if (!opt.bounds_energies.empty())
            spec = mzclock::ClockSpec(opt.bounds_energies);
        else
            throw mzclock::ConfigError("bounds: need --config, --omega or --energies");

        mzclock::ClockStateSpec ss;
        if (opt.bounds_state == "balanced") ss.kind = mzclock::ClockStateKind::balanced;
        else if (opt.bounds_state == "maximally_mixed") ss.kind = mzclock::ClockStateKind::maximally_mixed;
        else if (opt.bounds_state.rfind("eigenstate", 0) == 0) {
            ss.kind = mzclock::ClockStateKind::eigenstate;
            const auto pos = opt.bounds_state.find(' ');
            if (pos == std::string::npos)
                throw mzclock::ConfigError("bounds: --state 'eigenstate <k>' needs a level");
            ss.level = std::stoi(opt.bounds_state.substr(pos + 1));
        } else
            throw mzclock::ConfigError("bounds: unknown state '" + opt.bounds_state + "'");
        state = ss.build(spec->dimension());
    }

    const mzclock::OrthogonalizationTime t = mzclock::orthogonalization_time(*state, *spec, k);
    const double best = mzclock::orthogonalization_bound_min(*state, *spec, opt.alphas, k);

    OutputTarget target;
    target.open(opt.output_path);
    if (opt.format == "json") {
        nlohmann::json j;
        j["energies_J"] = spec->energies();
        switch (t.kind) {
            case mzclock::OrthogonalizationTime::Kind::found:
                j["t_perp_s"] = t.t_perp;
                break;
            case mzclock::OrthogonalizationTime::Kind::never:
                j["t_perp_s"] = "never";
                break;
            case mzclock::OrthogonalizationTime::Kind::window_exhausted:
                j["t_perp_s"] = "not found in scan window";
                j["t_perp_lower_bound_s"] = t.searched_up_to;
                break;
        }
        nlohmann::json b = nlohmann::json::array();
        for (double a : opt.alphas) {
            nlohmann::json row;
            row["alpha"] = a;
            row["rate_bound_hz"] = mzclock::orthogonalization_bound(*state, *spec, a, k);
            b.push_back(row);
        }
        j["bounds"] = std::move(b);
        j["best_rate_bound_hz"] = best;
        target.out() << j.dump(2) << "\n";
    } else {
        switch (t.kind) {
            case mzclock::OrthogonalizationTime::Kind::found:
                target.out() << "t_perp            = " << mzclock::format_g(t.t_perp) << " s"
                             << "   (ticking rate 1/t_perp = " << mzclock::format_g(1.0 / t.t_perp)
                             << " Hz)\n";
                break;
            case mzclock::OrthogonalizationTime::Kind::never:
                target.out() << "t_perp            = infinite (state never orthogonalizes)\n";
                break;
            case mzclock::OrthogonalizationTime::Kind::window_exhausted:
                target.out() << "t_perp            > " << mzclock::format_g(t.searched_up_to)
                             << " s (no zero found in scan window)\n";
                break;
        }
        for (double a : opt.alphas)
            target.out() << "rate bound (alpha=" << mzclock::format_g(a, 6)
                         << ") <= " << mzclock::format_g(
                                mzclock::orthogonalization_bound(*state, *spec, a, k))
                         << " Hz\n";
        target.out() << "best rate bound   = " << mzclock::format_g(best) << " Hz\n";
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mach-Zehnder interferometry of a particle with an internal clock in a "
                 "weak gravitational field"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config)
            cmd->add_option("--config", opt.config_path, "run configuration file")->required();
        cmd->add_option("--output", opt.output_path, "write output to a file instead of stdout");
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"text", "csv", "json"}));
    };

    CLI::App* sim = app.add_subcommand("simulate", "single interferometer run");
    add_common(sim, true);
    sim->add_flag("--verify", opt.verify, "cross-check the visibility with the joint-state oracle");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one variable over a grid");
    add_common(sweep, true);
    sweep->add_option("--var", opt.sweep_var, "delta_T, delta_h, phi or omega")->required();
    sweep->add_option("--from", opt.sweep_from, "range start (s, m, rad or Hz)")->required();
    sweep->add_option("--to", opt.sweep_to, "range end")->required();
    sweep->add_option("--samples", opt.sweep_samples, "grid size, in [2, 1e7]")->required();
    sweep->add_flag("--verify", opt.verify, "add an oracle visibility column");

    CLI::App* plan = app.add_subcommand("plan", "required vs achieved dh*dT for a platform");
    add_common(plan, false);
    plan->add_option("--system", opt.system_name, "catalog entry name");
    plan->add_option("--omega", opt.plan_omega, "explicit clock frequency [Hz]");
    plan->add_option("--achieved", opt.plan_achieved, "achieved dh*dT [m s]");
    plan->add_option("--g", opt.plan_g, "gravitational acceleration [m/s^2]");
    plan->add_option("--catalog", opt.catalog_path, "catalog CSV overriding the built-in table");

    CLI::App* classify = app.add_subcommand("classify", "interpret a measured visibility");
    add_common(classify, false);
    classify->add_option("--v-measured", opt.v_measured, "measured visibility")->required();
    classify->add_option("--v-qm", opt.v_qm, "predicted visibility")->required();
    classify->add_option("--error", opt.visibility_error, "visibility measurement error")->required();
    classify->add_option("--delta-tau", opt.delta_tau, "arm proper-time difference [s]")->required();

    CLI::App* bounds = app.add_subcommand("bounds", "orthogonalization time and rate bounds");
    bounds->add_option("--config", opt.config_path, "take the clock from a run configuration");
    bounds->add_option("--output", opt.output_path, "write output to a file instead of stdout");
    bounds->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    bounds->add_option("--omega", opt.bounds_omega, "two-level clock frequency [Hz]");
    bounds->add_option("--energies", opt.bounds_energies, "level energies [J], ascending")
        ->delimiter(',');
    bounds->add_option("--state", opt.bounds_state,
                       "balanced | maximally_mixed | 'eigenstate <k>'");
    bounds->add_option("--alpha", opt.alphas, "moment orders for the rate bound")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_parse_error;
    }

    try {
        if (sim->parsed()) return run_simulate(opt);
        if (sweep->parsed()) return run_sweep_cmd(opt);
        if (plan->parsed()) {
            if (opt.system_name.empty() && !opt.plan_omega) {
                std::cerr << "plan: need --system or --omega\n";
                return exit_parse_error;
            }
            return run_plan(opt);
        }
        if (classify->parsed()) return run_classify(opt);
        if (bounds->parsed()) return run_bounds(opt);
    } catch (const mzclock::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_domain_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_domain_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_ok;
}
