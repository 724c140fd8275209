#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mzclock/analysis.hpp"
#include "mzclock/clock.hpp"
#include "mzclock/constants.hpp"
#include "mzclock/interferometer.hpp"
#include "mzclock/oracle.hpp"

namespace mzclock {

// Configuration and command-line input problems; distinct from the physics
// domain errors so the CLI can map them to different exit codes.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view token, const std::string& context) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("cannot parse number '" + std::string(token) + "' in " + context);
    if (!std::isfinite(value))
        throw ConfigError("non-finite value in " + context);
    return value;
}

// "<number> <unit>" with a mandatory, exactly matching unit suffix.
inline double parse_quantity(std::string_view text, std::string_view unit,
                             const std::string& key) {
    text = trim(text);
    const auto split = text.find_first_of(" \t");
    if (split == std::string_view::npos)
        throw ConfigError("key '" + key + "': missing unit, expected '" + std::string(unit) + "'");
    const std::string_view number = text.substr(0, split);
    const std::string_view suffix = trim(text.substr(split));
    if (suffix != unit)
        throw ConfigError("key '" + key + "': unit mismatch, expected '" + std::string(unit) +
                          "' but got '" + std::string(suffix) + "'");
    return parse_number(number, "key '" + key + "'");
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

enum class ClockStateKind { balanced, eigenstate, maximally_mixed, amplitudes };

struct ClockStateSpec {
    ClockStateKind kind = ClockStateKind::balanced;
    int level = 0;                  // eigenstate index
    std::vector<double> amplitudes; // real amplitudes, normalized on build

    ClockState build(int dimension) const {
        switch (kind) {
            case ClockStateKind::balanced:
                return ClockState::balanced_superposition(dimension);
            case ClockStateKind::eigenstate:
                if (level < 0 || level >= dimension)
                    throw ConfigError("clock_state: eigenstate level " + std::to_string(level) +
                                      " out of range for " + std::to_string(dimension) +
                                      " levels");
                return ClockState::energy_eigenstate(dimension, level);
            case ClockStateKind::maximally_mixed:
                return ClockState::maximally_mixed(dimension);
            case ClockStateKind::amplitudes: {
                if (static_cast<int>(amplitudes.size()) != dimension)
                    throw ConfigError("clock_state: amplitude count does not match level count");
                Eigen::VectorXcd a(dimension);
                double norm2 = 0.0;
                for (int i = 0; i < dimension; ++i) norm2 += amplitudes[i] * amplitudes[i];
                if (!(norm2 > 0.0)) throw ConfigError("clock_state: zero amplitude vector");
                const double inv = 1.0 / std::sqrt(norm2);
                for (int i = 0; i < dimension; ++i) a[i] = amplitudes[i] * inv;
                return ClockState::pure(std::move(a));
            }
        }
        throw ConfigError("clock_state: unknown kind");
    }
};

// Flat description of one interferometer run: the hold geometry, the clock,
// and the field. Trajectories are built on demand; the optional transit
// segments are identical for the two arms by construction.
struct RunConfig {
    double mass = 0.0;          // [kg]
    double delta_h = 0.0;       // [m] arm separation
    double delta_T = 0.0;       // [s] hold time
    double phase_shifter = 0.0; // [rad]
    double base_height = 0.0;   // [m] lower arm height
    double transit_time = 0.0;  // [s] shared rise/fall segment duration
    double transit_speed = 0.0; // [m/s] vertical speed during transit
    double drift_speed = 0.0;   // [m/s] horizontal speed on holds

    std::optional<double> omega;        // [1/s] two-level clock frequency
    std::vector<double> clock_energies; // [J] explicit spectrum (mutually exclusive)
    ClockStateSpec clock_state{};

    FieldConfig field{};
    PhysicalConstants constants{};

    ClockSpec build_clock() const {
        if (omega && !clock_energies.empty())
            throw ConfigError("give either 'omega' or 'clock_energies', not both");
        if (omega) {
            if (!(*omega >= 0.0)) throw ConfigError("omega must be >= 0");
            return ClockSpec::from_frequency(*omega, constants);
        }
        if (clock_energies.empty())
            throw ConfigError("clock spectrum missing: set 'omega' or 'clock_energies'");
        return ClockSpec(clock_energies);
    }

    InterferometerConfig build() const {
        if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
        if (!(delta_T >= 0.0)) throw ConfigError("delta_T must be >= 0");
        if (!(transit_time >= 0.0)) throw ConfigError("transit_time must be >= 0");
        ClockSpec spec = build_clock();
        ClockState state = clock_state.build(spec.dimension());

        Trajectory arm1{1, {}};
        Trajectory arm2{2, {}};
        const TrajectorySegment transit{transit_time, base_height + 0.5 * delta_h,
                                        drift_speed, transit_speed};
        if (transit_time > 0.0) {
            arm1.segments.push_back(transit);
            arm2.segments.push_back(transit);
        }
        arm1.segments.push_back({delta_T, base_height + delta_h, drift_speed, 0.0});
        arm2.segments.push_back({delta_T, base_height, drift_speed, 0.0});
        if (transit_time > 0.0) {
            arm1.segments.push_back(transit);
            arm2.segments.push_back(transit);
        }

        return InterferometerConfig{mass,          std::move(spec), std::move(state),
                                    std::move(arm1), std::move(arm2), phase_shifter,
                                    field,         constants};
    }
};

// --- flat key/value format -------------------------------------------------
//
// One `key = value` per line, '#' starts a comment. Every physical quantity
// carries a mandatory unit suffix; a wrong or missing unit is a parse error.
// Recognized keys (units in brackets):
//   mass [kg]            delta_h [m]        delta_T [s]      phase_shifter [rad]
//   base_height [m]      transit_time [s]   transit_speed [m/s]
//   drift_speed [m/s]    omega [Hz]         clock_energies [J, comma list]
//   clock_state          source_mass [kg]   source_radius [m]   g [m/s^2]
// clock_state is one of: balanced | eigenstate <k> | maximally_mixed |
// amplitudes <a0> <a1> ...

inline RunConfig parse_key_value_config(const std::string& text) {
    RunConfig rc;
    bool seen_mass = false, seen_dh = false, seen_dt = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key{detail::trim(line.substr(0, eq))};
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");

        if (key == "mass") { rc.mass = detail::parse_quantity(value, "kg", key); seen_mass = true; }
        else if (key == "delta_h") { rc.delta_h = detail::parse_quantity(value, "m", key); seen_dh = true; }
        else if (key == "delta_T") { rc.delta_T = detail::parse_quantity(value, "s", key); seen_dt = true; }
        else if (key == "phase_shifter") rc.phase_shifter = detail::parse_quantity(value, "rad", key);
        else if (key == "base_height") rc.base_height = detail::parse_quantity(value, "m", key);
        else if (key == "transit_time") rc.transit_time = detail::parse_quantity(value, "s", key);
        else if (key == "transit_speed") rc.transit_speed = detail::parse_quantity(value, "m/s", key);
        else if (key == "drift_speed") rc.drift_speed = detail::parse_quantity(value, "m/s", key);
        else if (key == "omega") rc.omega = detail::parse_quantity(value, "Hz", key);
        else if (key == "clock_energies") {
            rc.clock_energies.clear();
            for (const auto part : detail::split(value, ','))
                rc.clock_energies.push_back(detail::parse_quantity(part, "J", key));
        } else if (key == "clock_state") {
            std::istringstream words{std::string(value)};
            std::string kind;
            words >> kind;
            if (kind == "balanced") rc.clock_state = {ClockStateKind::balanced, 0, {}};
            else if (kind == "maximally_mixed") rc.clock_state = {ClockStateKind::maximally_mixed, 0, {}};
            else if (kind == "eigenstate") {
                int level = -1;
                if (!(words >> level))
                    throw ConfigError("clock_state eigenstate: missing level index");
                rc.clock_state = {ClockStateKind::eigenstate, level, {}};
            } else if (kind == "amplitudes") {
                std::vector<double> amps;
                std::string tok;
                while (words >> tok) amps.push_back(detail::parse_number(tok, "clock_state amplitudes"));
                if (amps.empty()) throw ConfigError("clock_state amplitudes: no values given");
                rc.clock_state = {ClockStateKind::amplitudes, 0, std::move(amps)};
            } else
                throw ConfigError("clock_state: unknown kind '" + kind + "'");
        }
        else if (key == "source_mass") rc.field.source_mass = detail::parse_quantity(value, "kg", key);
        else if (key == "source_radius") rc.field.source_radius = detail::parse_quantity(value, "m", key);
        else if (key == "g") rc.field.g_override = detail::parse_quantity(value, "m/s^2", key);
        else
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (!seen_mass) throw ConfigError("missing required key 'mass'");
    if (!seen_dh) throw ConfigError("missing required key 'delta_h'");
    if (!seen_dt) throw ConfigError("missing required key 'delta_T'");
    return rc;
}

// --- JSON format -------------------------------------------------------------
//
// The JSON emitted with results embeds the resolved configuration; feeding
// that document back as a config reproduces the run bit for bit. Unit
// conventions are part of the key names.

inline nlohmann::json run_config_to_json(const RunConfig& rc) {
    nlohmann::json j;
    j["mass_kg"] = rc.mass;
    j["delta_h_m"] = rc.delta_h;
    j["delta_T_s"] = rc.delta_T;
    j["phase_shifter_rad"] = rc.phase_shifter;
    j["base_height_m"] = rc.base_height;
    j["transit_time_s"] = rc.transit_time;
    j["transit_speed_m_per_s"] = rc.transit_speed;
    j["drift_speed_m_per_s"] = rc.drift_speed;
    if (rc.omega) j["omega_hz"] = *rc.omega;
    if (!rc.clock_energies.empty()) j["clock_energies_J"] = rc.clock_energies;
    nlohmann::json state;
    switch (rc.clock_state.kind) {
        case ClockStateKind::balanced: state["kind"] = "balanced"; break;
        case ClockStateKind::eigenstate:
            state["kind"] = "eigenstate";
            state["level"] = rc.clock_state.level;
            break;
        case ClockStateKind::maximally_mixed: state["kind"] = "maximally_mixed"; break;
        case ClockStateKind::amplitudes:
            state["kind"] = "amplitudes";
            state["values"] = rc.clock_state.amplitudes;
            break;
    }
    j["clock_state"] = state;
    j["field"]["source_mass_kg"] = rc.field.source_mass;
    j["field"]["source_radius_m"] = rc.field.source_radius;
    if (rc.field.g_override) j["field"]["g_m_per_s2"] = *rc.field.g_override;
    j["constants"]["c_m_per_s"] = rc.constants.c;
    j["constants"]["hbar_J_s"] = rc.constants.hbar;
    j["constants"]["G_m3_per_kg_s2"] = rc.constants.G;
    return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& doc) {
    // accept both a bare config object and a full output document
    const nlohmann::json& j = doc.contains("config") ? doc.at("config") : doc;
    RunConfig rc;
    try {
        rc.mass = j.at("mass_kg").get<double>();
        rc.delta_h = j.at("delta_h_m").get<double>();
        rc.delta_T = j.at("delta_T_s").get<double>();
        rc.phase_shifter = j.value("phase_shifter_rad", 0.0);
        rc.base_height = j.value("base_height_m", 0.0);
        rc.transit_time = j.value("transit_time_s", 0.0);
        rc.transit_speed = j.value("transit_speed_m_per_s", 0.0);
        rc.drift_speed = j.value("drift_speed_m_per_s", 0.0);
        if (j.contains("omega_hz")) rc.omega = j.at("omega_hz").get<double>();
        if (j.contains("clock_energies_J"))
            rc.clock_energies = j.at("clock_energies_J").get<std::vector<double>>();
        if (j.contains("clock_state")) {
            const auto& s = j.at("clock_state");
            const std::string kind = s.at("kind").get<std::string>();
            if (kind == "balanced") rc.clock_state = {ClockStateKind::balanced, 0, {}};
            else if (kind == "maximally_mixed") rc.clock_state = {ClockStateKind::maximally_mixed, 0, {}};
            else if (kind == "eigenstate")
                rc.clock_state = {ClockStateKind::eigenstate, s.at("level").get<int>(), {}};
            else if (kind == "amplitudes")
                rc.clock_state = {ClockStateKind::amplitudes, 0,
                                  s.at("values").get<std::vector<double>>()};
            else throw ConfigError("clock_state: unknown kind '" + kind + "'");
        }
        if (j.contains("field")) {
            const auto& f = j.at("field");
            rc.field.source_mass = f.value("source_mass_kg", rc.field.source_mass);
            rc.field.source_radius = f.value("source_radius_m", rc.field.source_radius);
            if (f.contains("g_m_per_s2")) rc.field.g_override = f.at("g_m_per_s2").get<double>();
        }
        if (j.contains("constants")) {
            const auto& c = j.at("constants");
            rc.constants.c = c.value("c_m_per_s", rc.constants.c);
            rc.constants.hbar = c.value("hbar_J_s", rc.constants.hbar);
            rc.constants.G = c.value("G_m3_per_kg_s2", rc.constants.G);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("JSON config: ") + e.what());
    }
    return rc;
}

// Text sniffing: a document starting with '{' is JSON, anything else the flat
// key/value format.
inline RunConfig parse_run_config(const std::string& text) {
    const std::string_view t = detail::trim(text);
    if (!t.empty() && t.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("JSON config: ") + e.what());
        }
        return run_config_from_json(j);
    }
    return parse_key_value_config(text);
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

// --- parameter sweeps --------------------------------------------------------

enum class SweepVariable { delta_T, delta_h, phi, omega };

inline SweepVariable parse_sweep_variable(std::string_view name) {
    if (name == "delta_T") return SweepVariable::delta_T;
    if (name == "delta_h") return SweepVariable::delta_h;
    if (name == "phi") return SweepVariable::phi;
    if (name == "omega") return SweepVariable::omega;
    throw ConfigError("unknown sweep variable '" + std::string(name) +
                      "' (expected delta_T, delta_h, phi or omega)");
}

inline const char* sweep_variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::delta_T: return "delta_T";
        case SweepVariable::delta_h: return "delta_h";
        case SweepVariable::phi: return "phi";
        case SweepVariable::omega: return "omega";
    }
    return "?";
}

inline const char* sweep_variable_unit(SweepVariable v) {
    switch (v) {
        case SweepVariable::delta_T: return "s";
        case SweepVariable::delta_h: return "m";
        case SweepVariable::phi: return "rad";
        case SweepVariable::omega: return "Hz";
    }
    return "?";
}

struct SweepSpec {
    SweepVariable variable;
    double from;
    double to;
    long samples;
};

struct SweepRow {
    double value;
    InterferenceResult result;
    double envelope; // closed-form visibility from delta_tau and t_perp
    std::optional<double> oracle_visibility;
};

// Evaluates the interferometer over an inclusive, evenly spaced grid.
// Deterministic ordering; the envelope column restates the visibility through
// the dilation/orthogonalization-time form.
inline std::vector<SweepRow> run_sweep(const RunConfig& base, const SweepSpec& spec,
                                       bool verify = false) {
    if (spec.samples < 2 || spec.samples > 10'000'000)
        throw ConfigError("sweep samples must be in [2, 1e7]");
    if (!std::isfinite(spec.from) || !std::isfinite(spec.to))
        throw ConfigError("sweep range must be finite");
    if (spec.variable == SweepVariable::omega && !base.omega)
        throw ConfigError("omega sweep requires a config with the 'omega' clock form");

    std::optional<OrthogonalizationTime> fixed_t_perp;
    if (spec.variable != SweepVariable::omega) {
        const ClockSpec clock = base.build_clock();
        fixed_t_perp = orthogonalization_time(base.clock_state.build(clock.dimension()), clock,
                                              base.constants);
    }

    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.samples));
    for (long i = 0; i < spec.samples; ++i) {
        const double x = spec.from + (spec.to - spec.from) *
                                         (static_cast<double>(i) /
                                          static_cast<double>(spec.samples - 1));
        RunConfig rc = base;
        switch (spec.variable) {
            case SweepVariable::delta_T: rc.delta_T = x; break;
            case SweepVariable::delta_h: rc.delta_h = x; break;
            case SweepVariable::phi: rc.phase_shifter = x; break;
            case SweepVariable::omega: rc.omega = x; break;
        }
        const InterferometerConfig cfg = rc.build();
        SweepRow row{x, interfere(cfg), 1.0, std::nullopt};
        const OrthogonalizationTime t_perp =
            fixed_t_perp ? *fixed_t_perp
                         : orthogonalization_time(cfg.clock_initial, cfg.clock, cfg.constants);
        row.envelope = visibility_from_dilation(row.result.delta_tau, t_perp);
        if (verify) row.oracle_visibility = brute_force_oracle(cfg).visibility;
        rows.push_back(row);
    }
    return rows;
}

// --- system catalog ----------------------------------------------------------
//
// CSV with a fixed header: name,clock_mechanism,omega_hz,achieved_dhdt_ms

inline constexpr const char* catalog_csv_header = "name,clock_mechanism,omega_hz,achieved_dhdt_ms";

inline std::vector<SystemCatalogEntry> load_catalog(std::istream& in) {
    std::vector<SystemCatalogEntry> entries;
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("catalog: empty file");
    if (detail::trim(line) != catalog_csv_header)
        throw ConfigError(std::string("catalog: expected header '") + catalog_csv_header + "'");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view l = detail::trim(line);
        if (l.empty()) continue;
        const auto fields = detail::split(l, ',');
        if (fields.size() != 4)
            throw ConfigError("catalog line " + std::to_string(lineno) + ": expected 4 fields");
        SystemCatalogEntry e;
        e.name = std::string(detail::trim(fields[0]));
        e.clock_mechanism = std::string(detail::trim(fields[1]));
        e.omega = detail::parse_number(fields[2], "catalog omega");
        e.achieved_dhdt = detail::parse_number(fields[3], "catalog achieved_dhdt");
        if (e.name.empty() || !(e.omega > 0.0) || !(e.achieved_dhdt > 0.0))
            throw ConfigError("catalog line " + std::to_string(lineno) + ": invalid entry");
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw ConfigError("catalog: no entries");
    return entries;
}

inline std::vector<SystemCatalogEntry> load_catalog_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open catalog file '" + path + "'");
    return load_catalog(in);
}

} // namespace mzclock
