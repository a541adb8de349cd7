#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "szilard/constants.hpp"
#include "szilard/cycle.hpp"
#include "szilard/qbl.hpp"
#include "szilard/spectrum.hpp"
#include "szilard/sweep.hpp"
#include "szilard/thermo.hpp"

namespace szilard {

/// Shortest round-trip decimal, widened with trailing zeros to at least
/// `min_sig` significant digits so regression diffs and plots stay stable.
inline std::string format_sig(double v, int min_sig = 12) {
    if (v == 0.0) return "0";
    if (!std::isfinite(v)) return v != v ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);

    const std::size_t epos = s.find_first_of("eE");
    std::string mant = epos == std::string::npos ? s : s.substr(0, epos);
    const std::string expo = epos == std::string::npos ? "" : s.substr(epos);
    int digits = 0;
    bool counting = false;
    for (char ch : mant) {
        if (ch >= '1' && ch <= '9') counting = true;
        if (counting && ch >= '0' && ch <= '9') ++digits;
    }
    if (digits >= min_sig) return s;
    if (mant.find('.') == std::string::npos) mant += '.';
    mant.append(std::size_t(min_sig - digits), '0');
    return mant + expo;
}

/// FNV-1a 64-bit hash, used to stamp outputs with their configuration.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    static const char* hexd = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hexd[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

inline nlohmann::json constants_json(const PhysicalConstants& c) {
    return {{"h", {{"value", c.h}, {"unit", "J s"}}},
            {"k", {{"value", c.k}, {"unit", "J/K"}}},
            {"m", {{"value", c.m}, {"unit", "kg"}}}};
}

inline nlohmann::json thermo_state_json(const ThermoState& st) {
    return {{"temperature", {{"value", st.temperature}, {"unit", "K"}}},
            {"Z", {{"value", st.z}, {"unit", "dimensionless"}}},
            {"ln_Z", {{"value", st.log_z}, {"unit", "dimensionless"}}},
            {"F", {{"value", st.f}, {"unit", "J"}}},
            {"S", {{"value", st.s}, {"unit", "J/K"}}},
            {"U", {{"value", st.u}, {"unit", "J"}}},
            {"side_multiplicity", st.multiplicity}};
}

inline nlohmann::json step_exchange_json(const StepExchange& x) {
    return {{"step", step_name(x.step)},
            {"W", {{"value", x.w}, {"unit", "J"}}},
            {"Q", {{"value", x.q}, {"unit", "J"}}},
            {"dU", {{"value", x.du}, {"unit", "J"}}}};
}

inline nlohmann::json ledger_json(const CycleLedger& lg) {
    static const char* comp[3] = {"system", "device", "bath"};
    static const char* qty[3] = {"dF", "TdS", "dU"};
    nlohmann::json cells;
    for (int ci = 0; ci < 3; ++ci)
        for (int qi = 0; qi < 3; ++qi) {
            nlohmann::json row = nlohmann::json::array();
            for (int s = 0; s < 4; ++s) row.push_back(lg.cells[ci][qi][s]);
            cells[comp[ci]][qty[qi]] = row;
        }
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : lg.steps) steps.push_back(step_exchange_json(st));
    return {{"length", {{"value", lg.length}, {"unit", "m"}}},
            {"temperature", {{"value", lg.temperature}, {"unit", "K"}}},
            {"unit", "J"},
            {"steps", steps},
            {"cells", cells}};
}

/// Aligned table mirroring the four-step, three-component exchange ledger.
inline std::string ledger_text(const CycleLedger& lg, EnergyUnit unit,
                               const PhysicalConstants& c = {}) {
    static const char* comp[3] = {"system", "device", "bath"};
    static const char* qty[3] = {"dF ", "TdS", "dU "};
    std::ostringstream os;
    os << "cycle exchange ledger  (Lx = " << format_sig(lg.length * 1e9, 6)
       << " nm, T = " << format_sig(lg.temperature, 6) << " K, cell unit: " << unit_name(unit)
       << ")\n";
    os << "                      I:insert    II:measure   III:expand    IV:remove          sum\n";
    char buf[64];
    auto cell = [&](double joule) {
        const double v = convert_energy(joule, lg.temperature, unit, c);
        std::snprintf(buf, sizeof(buf), "%+13.6e", v);
        return std::string(buf);
    };
    for (int ci = 0; ci < 3; ++ci) {
        for (int qi = 0; qi < 3; ++qi) {
            os << (qi == 0 ? std::string("  ") + comp[ci] + std::string(8 - std::string(comp[ci]).size(), ' ')
                           : std::string("          "));
            os << qty[qi];
            double sum = 0.0;
            for (int s = 0; s < 4; ++s) {
                os << cell(lg.cells[ci][qi][s]);
                sum += lg.cells[ci][qi][s];
            }
            os << cell(sum) << "\n";
        }
    }
    return os.str();
}

/// Combined sweep CSV: abscissa_nm,F_J,S_J_per_K,U_J at 12 significant digits.
/// Prelude lines are emitted as '#' comments; failed points keep their row
/// (nan) and an explanatory comment.
inline std::string sweep_curve_csv(const SweepCurve& curve,
                                   const std::vector<std::string>& prelude = {}) {
    std::ostringstream os;
    for (const auto& line : prelude) os << "# " << line << "\n";
    os << "abscissa_nm,F_J,S_J_per_K,U_J\n";
    for (std::size_t i = 0; i < curve.abscissa.size(); ++i) {
        if (!curve.status[i].ok)
            os << "# point " << i << " failed: " << curve.status[i].message << "\n";
        os << format_sig(curve.abscissa[i] * 1e9) << "," << format_sig(curve.f[i]) << ","
           << format_sig(curve.s[i]) << "," << format_sig(curve.u[i]) << "\n";
    }
    return os.str();
}

/// One-quantity panel CSV (for figure data), same comment/format rules.
inline std::string sweep_panel_csv(const SweepCurve& curve, char quantity,
                                   const std::vector<std::string>& prelude = {}) {
    const std::vector<double>* col = nullptr;
    const char* name = nullptr;
    switch (quantity) {
        case 'F': col = &curve.f; name = "F_J"; break;
        case 'S': col = &curve.s; name = "S_J_per_K"; break;
        case 'U': col = &curve.u; name = "U_J"; break;
        default: throw UsageError("unknown sweep quantity (expected F, S or U)");
    }
    std::ostringstream os;
    for (const auto& line : prelude) os << "# " << line << "\n";
    os << "abscissa_nm," << name << "\n";
    for (std::size_t i = 0; i < curve.abscissa.size(); ++i)
        os << format_sig(curve.abscissa[i] * 1e9) << "," << format_sig((*col)[i]) << "\n";
    return os.str();
}

/// Density CSV: x_nm,y_nm,density_per_nm2, row-major (x fastest), 9 digits.
inline std::string scalar_field_csv(const ScalarField& field,
                                    const std::vector<std::string>& prelude = {}) {
    std::ostringstream os;
    for (const auto& line : prelude) os << "# " << line << "\n";
    os << "x_nm,y_nm,density_per_nm2\n";
    for (int j = 0; j <= field.ny; ++j)
        for (int i = 0; i <= field.nx; ++i)
            os << format_sig(i * field.hx * 1e9, 9) << "," << format_sig(j * field.hy * 1e9, 9)
               << "," << format_sig(field.at(i, j) * 1e-18, 9) << "\n";
    return os.str();
}

inline nlohmann::json scalar_field_json(const ScalarField& field) {
    nlohmann::json values = nlohmann::json::array();
    for (double v : field.values) values.push_back(v * 1e-18);  // 1/nm^2
    return {{"grid",
             {{"nx_cells", field.nx},
              {"ny_cells", field.ny},
              {"hx_nm", field.hx * 1e9},
              {"hy_nm", field.hy * 1e9},
              {"ordering", "row-major, x fastest, boundary nodes included"}}},
            {"unit", "1/nm^2"},
            {"values", values}};
}

inline nlohmann::json qbl_report_json(const QblReport& r) {
    return {{"L", {{"value", r.length}, {"unit", "m"}}},
            {"temperature", {{"value", r.temperature}, {"unit", "K"}}},
            {"delta", {{"value", r.delta}, {"unit", "m"}}},
            {"analytic",
             {{"W", r.w_analytic}, {"dU", r.du_analytic}, {"Q", r.q_analytic}, {"unit", "J"}}},
            {"exact", {{"W", r.w_exact}, {"dU", r.du_exact}, {"Q", r.q_exact}, {"unit", "J"}}},
            {"relative_error", {{"W", r.w_rel_err}, {"dU", r.du_rel_err}, {"Q", r.q_rel_err}}},
            {"near_validity_boundary", r.near_validity_boundary}};
}

/// Two-column aligned comparison of one QBL report.
inline std::string qbl_report_text(const QblReport& r) {
    std::ostringstream os;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "L = %.6g nm, T = %.6g K, delta = %.6g nm%s\n",
                  r.length * 1e9, r.temperature, r.delta * 1e9,
                  r.near_validity_boundary ? "  [near validity boundary]" : "");
    os << buf;
    os << "  quantity      analytic (J)          exact (J)        rel. error\n";
    auto row = [&](const char* name, double a, double e, double err) {
        std::snprintf(buf, sizeof(buf), "  %-8s %+18.11e %+18.11e   %9.3e\n", name, a, e, err);
        os << buf;
    };
    row("W_ins", r.w_analytic, r.w_exact, r.w_rel_err);
    row("dU_ins", r.du_analytic, r.du_exact, r.du_rel_err);
    row("Q_ins", r.q_analytic, r.q_exact, r.q_rel_err);
    return os.str();
}

}  // namespace szilard
