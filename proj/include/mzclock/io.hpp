#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "mzclock/analysis.hpp"
#include "mzclock/interferometer.hpp"
#include "mzclock/run_config.hpp"

namespace mzclock {

// Locale-independent general-format rendering, 12 significant digits by
// default.
inline std::string format_g(double value, int digits = 12) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, digits);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

inline std::string wrap_angle(double phi) {
    return format_g(std::remainder(phi, 2.0 * std::numbers::pi));
}

inline void render_result_text(const InterferenceResult& r, std::ostream& out) {
    out << "P+                  = " << format_g(r.p_plus) << "\n"
        << "P-                  = " << format_g(r.p_minus) << "\n"
        << "visibility          = " << format_g(r.visibility) << "\n"
        << "distinguishability  = " << format_g(r.distinguishability) << "\n"
        << "delta_phi           = " << format_g(r.delta_phi) << " rad"
        << " (mod 2pi: " << wrap_angle(r.delta_phi) << ")\n"
        << "alpha               = " << format_g(r.alpha) << " rad\n"
        << "delta_tau           = " << format_g(r.delta_tau) << " s\n";
}

inline nlohmann::json result_to_json(const InterferenceResult& r) {
    nlohmann::json j;
    j["p_plus"] = r.p_plus;
    j["p_minus"] = r.p_minus;
    j["visibility"] = r.visibility;
    j["distinguishability"] = r.distinguishability;
    j["delta_phi_rad"] = r.delta_phi;
    j["alpha_rad"] = r.alpha;
    j["delta_tau_s"] = r.delta_tau;
    return j;
}

inline std::string result_csv_header(bool verify) {
    std::string h =
        "p_plus,p_minus,p_diff,visibility,distinguishability,delta_phi_rad,alpha_rad,delta_tau_s";
    if (verify) h += ",visibility_oracle";
    return h;
}

inline void render_result_csv_row(const InterferenceResult& r, std::ostream& out,
                                  std::optional<double> oracle_visibility = std::nullopt) {
    out << format_g(r.p_plus) << ',' << format_g(r.p_minus) << ','
        << format_g(r.p_plus - r.p_minus) << ',' << format_g(r.visibility) << ','
        << format_g(r.distinguishability) << ',' << format_g(r.delta_phi) << ','
        << format_g(r.alpha) << ',' << format_g(r.delta_tau);
    if (oracle_visibility) out << ',' << format_g(*oracle_visibility);
    out << '\n';
}

// Sweep table: header row with the variable name and unit first, one record
// per grid point, dot decimal separator, UTF-8.
inline void render_sweep_csv(const std::vector<SweepRow>& rows, SweepVariable var,
                             bool verify, std::ostream& out) {
    out << sweep_variable_name(var) << '_' << sweep_variable_unit(var)
        << ",p_plus,p_minus,p_diff,visibility,envelope,distinguishability,"
           "delta_phi_rad,alpha_rad,delta_tau_s";
    if (verify) out << ",visibility_oracle";
    out << '\n';
    for (const auto& row : rows) {
        const auto& r = row.result;
        out << format_g(row.value) << ',' << format_g(r.p_plus) << ',' << format_g(r.p_minus)
            << ',' << format_g(r.p_plus - r.p_minus) << ',' << format_g(r.visibility) << ','
            << format_g(row.envelope) << ',' << format_g(r.distinguishability) << ','
            << format_g(r.delta_phi) << ',' << format_g(r.alpha) << ','
            << format_g(r.delta_tau);
        if (verify) out << ',' << format_g(row.oracle_visibility.value_or(r.visibility));
        out << '\n';
    }
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows, SweepVariable var) {
    nlohmann::json j;
    j["variable"] = sweep_variable_name(var);
    j["unit"] = sweep_variable_unit(var);
    nlohmann::json list = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r = result_to_json(row.result);
        r["value"] = row.value;
        r["envelope"] = row.envelope;
        if (row.oracle_visibility) r["visibility_oracle"] = *row.oracle_visibility;
        list.push_back(std::move(r));
    }
    j["rows"] = std::move(list);
    return j;
}

inline nlohmann::json feasibility_to_json(const SystemCatalogEntry& e,
                                          const FeasibilityReport& rep, double g) {
    nlohmann::json j;
    j["system"] = e.name;
    j["clock_mechanism"] = e.clock_mechanism;
    j["omega_hz"] = e.omega;
    j["g_m_per_s2"] = g;
    j["required_dhdt_ms"] = rep.required_dhdt;
    j["achieved_dhdt_ms"] = rep.achieved_dhdt;
    j["ratio_required_over_achieved"] = rep.ratio;
    j["predicted_visibility_at_achieved"] = rep.predicted_visibility;
    j["visibility_deficit_at_achieved"] = rep.visibility_deficit;
    return j;
}

inline void render_feasibility_text(const SystemCatalogEntry& e, const FeasibilityReport& rep,
                                    double g, std::ostream& out) {
    const double order = std::round(std::log10(rep.required_dhdt));
    out << "system                    : " << e.name << " (" << e.clock_mechanism << ")\n"
        << "clock frequency omega     = " << format_g(e.omega) << " Hz\n"
        << "assumed g                 = " << format_g(g) << " m/s^2\n"
        << "required  dh*dT           = " << format_g(rep.required_dhdt)
        << " m s  (order of magnitude 10^" << static_cast<long long>(order) << ")\n"
        << "achieved  dh*dT           = " << format_g(rep.achieved_dhdt) << " m s\n"
        << "required/achieved         = " << format_g(rep.ratio) << "\n"
        << "predicted V at achieved   = " << format_g(rep.predicted_visibility) << "\n"
        << "visibility deficit (1-V)  = " << format_g(rep.visibility_deficit) << "\n";
}

inline void render_classification_text(const OutcomeClassification& c, std::ostream& out) {
    out << "measured visibility  = " << format_g(c.v_measured) << "\n"
        << "predicted visibility = " << format_g(c.v_qm) << "\n"
        << "measurement error    = " << format_g(c.visibility_error) << "\n"
        << "verdict              : " << verdict_label(c.verdict) << "\n";
    if (c.sigma_tau)
        out << "sigma_tau bound      > " << format_g(*c.sigma_tau) << " s\n";
}

inline nlohmann::json classification_to_json(const OutcomeClassification& c) {
    nlohmann::json j;
    j["v_measured"] = c.v_measured;
    j["v_qm"] = c.v_qm;
    j["visibility_error"] = c.visibility_error;
    j["verdict"] = verdict_label(c.verdict);
    if (c.sigma_tau) j["sigma_tau_bound_s"] = *c.sigma_tau;
    return j;
}

} // namespace mzclock
