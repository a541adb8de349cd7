#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "szilard/analytic.hpp"
#include "szilard/constants.hpp"
#include "szilard/thermo.hpp"

namespace szilard {

enum class CycleStep { Insertion, Measurement, Expansion, Removal };

inline const char* step_name(CycleStep s) {
    switch (s) {
        case CycleStep::Insertion: return "insertion";
        case CycleStep::Measurement: return "measurement";
        case CycleStep::Expansion: return "expansion";
        case CycleStep::Removal: return "removal";
    }
    return "?";
}

/// Work done ON the system, heat absorbed BY the system, and the change of
/// its internal energy, for one quasistatic isothermal step. The first law
/// dU = W + Q holds for every step produced here.
struct StepExchange {
    CycleStep step = CycleStep::Insertion;
    double w = 0.0;   // J
    double q = 0.0;   // J
    double du = 0.0;  // J
};

/// Provides the spectrum of a 1D compartment of the given length.
using SpectrumSource = std::function<Spectrum(double length, double temperature)>;

/// Exact 1D analytic levels truncated at E_ground + C kT.
inline SpectrumSource analytic_1d_source(const PhysicalConstants& c = {},
                                         double cutoff_multiplier = 40.0) {
    return [c, cutoff_multiplier](double length, double temperature) {
        const double e0 = box_ground_energy(length, c);
        return energies_1d(length, default_cutoff(e0, temperature, c, cutoff_multiplier), c);
    };
}

namespace detail {
inline void check_first_law(const StepExchange& x, double kT) {
    const double scale = std::max({std::abs(x.du), std::abs(x.w), std::abs(x.q), 1e-3 * kT});
    if (!(std::abs(x.du - (x.w + x.q)) <= 1e-10 * scale))
        throw Error(std::string("first law violated in ") + step_name(x.step) + " step");
}
}  // namespace detail

/// Step I. Full box (g=1) -> two superposed halves (g=2):
/// W = kT ln[Z(L)/(2 Z(L/2))], Q = T (S_II - S_I), dU = U(L/2) - U(L).
inline StepExchange insertion_step(double length, double temperature,
                                   const SpectrumSource& source,
                                   const PhysicalConstants& c = {}) {
    const ThermoState before = thermo_state(source(length, temperature), temperature, 1, c);
    const ThermoState after = thermo_state(source(length / 2.0, temperature), temperature, 2, c);
    StepExchange x;
    x.step = CycleStep::Insertion;
    x.w = after.f - before.f;
    x.q = temperature * (after.s - before.s);
    x.du = after.u - before.u;
    detail::check_first_law(x, thermal_energy(temperature, c));
    return x;
}

/// Step II. Localization by measurement: W = +kT ln 2, Q = -kT ln 2, dU = 0,
/// independent of geometry.
inline StepExchange measurement_step(double temperature, const PhysicalConstants& c = {}) {
    const double w = thermal_energy(temperature, c) * std::numbers::ln2;
    return {CycleStep::Measurement, w, -w, 0.0};
}

/// Step III. Localized half (g=1) -> full box:
/// W = kT ln[Z(L/2)/Z(L)] = -W_ins - kT ln 2, dU = -dU_ins.
inline StepExchange expansion_step(double length, double temperature,
                                   const SpectrumSource& source,
                                   const PhysicalConstants& c = {}) {
    const ThermoState before = thermo_state(source(length / 2.0, temperature), temperature, 1, c);
    const ThermoState after = thermo_state(source(length, temperature), temperature, 1, c);
    StepExchange x;
    x.step = CycleStep::Expansion;
    x.w = after.f - before.f;
    x.q = temperature * (after.s - before.s);
    x.du = after.u - before.u;
    detail::check_first_law(x, thermal_energy(temperature, c));
    return x;
}

/// Step IV. Removing the wall-adjacent partition exchanges nothing.
inline StepExchange removal_step() { return {CycleStep::Removal, 0.0, 0.0, 0.0}; }

enum class LedgerComponent { System = 0, Device = 1, Bath = 2 };
enum class LedgerQuantity { DeltaF = 0, TDeltaS = 1, DeltaU = 2 };

/// Per-step, per-component table of dF, T dS and dU (all in J; entropy rows
/// are stored as T dS so every cell shares units). Rows for the system and
/// all columns sum to zero; the device participates only in step II.
struct CycleLedger {
    double length = 0.0;
    double temperature = 0.0;
    std::array<StepExchange, 4> steps{};

    // cells[component][quantity][step], J
    double cells[3][3][4] = {};

    double cell(LedgerComponent comp, LedgerQuantity q, int step) const {
        return cells[int(comp)][int(q)][step];
    }
    double system_row_sum(LedgerQuantity q) const {
        const auto& row = cells[0][int(q)];
        return row[0] + row[1] + row[2] + row[3];
    }
    double column_sum(LedgerQuantity q, int step) const {
        return cells[0][int(q)][step] + cells[1][int(q)][step] + cells[2][int(q)][step];
    }
    /// Work extracted from the system over the whole cycle.
    double net_extractable_work() const { return -system_row_sum(LedgerQuantity::DeltaF); }
};

inline CycleLedger run_cycle(double length, double temperature, const SpectrumSource& source,
                             const PhysicalConstants& c = {}) {
    CycleLedger lg;
    lg.length = length;
    lg.temperature = temperature;
    lg.steps = {insertion_step(length, temperature, source, c), measurement_step(temperature, c),
                expansion_step(length, temperature, source, c), removal_step()};

    const StepExchange& ins = lg.steps[0];
    const StepExchange& msr = lg.steps[1];

    auto put = [&lg](LedgerComponent comp, LedgerQuantity q, double s1, double s2, double s3,
                     double s4) {
        double* row = lg.cells[int(comp)][int(q)];
        row[0] = s1;
        row[1] = s2;
        row[2] = s3;
        row[3] = s4;
    };
    // System: dF accumulates work input, T dS = Q, dU as computed.
    put(LedgerComponent::System, LedgerQuantity::DeltaF, ins.w, msr.w, -msr.w - ins.w, 0.0);
    put(LedgerComponent::System, LedgerQuantity::TDeltaS, ins.q, msr.q, -msr.q - ins.q, 0.0);
    put(LedgerComponent::System, LedgerQuantity::DeltaU, ins.du, 0.0, -ins.du, 0.0);
    // Device: engaged only during the measurement step.
    put(LedgerComponent::Device, LedgerQuantity::DeltaF, 0.0, -msr.w, 0.0, 0.0);
    put(LedgerComponent::Device, LedgerQuantity::TDeltaS, 0.0, -msr.q, 0.0, 0.0);
    put(LedgerComponent::Device, LedgerQuantity::DeltaU, 0.0, 0.0, 0.0, 0.0);
    // Bath: mirrors the system's exchanges.
    put(LedgerComponent::Bath, LedgerQuantity::DeltaF, -ins.w, 0.0, msr.w + ins.w, 0.0);
    put(LedgerComponent::Bath, LedgerQuantity::TDeltaS, -ins.q, 0.0, msr.q + ins.q, 0.0);
    put(LedgerComponent::Bath, LedgerQuantity::DeltaU, -ins.du, 0.0, ins.du, 0.0);
    return lg;
}

/// Named violations of the ledger's zero-sum structure; empty means valid.
inline std::vector<std::string> ledger_violations(const CycleLedger& lg,
                                                  const PhysicalConstants& c = {}) {
    const double kT = thermal_energy(lg.temperature, c);
    std::vector<std::string> bad;
    static const char* qname[3] = {"dF", "TdS", "dU"};
    for (int q = 0; q < 3; ++q) {
        if (std::abs(lg.system_row_sum(LedgerQuantity(q))) > 1e-10 * kT)
            bad.push_back(std::string("system ") + qname[q] + " row does not close");
        for (int s = 0; s < 4; ++s)
            if (std::abs(lg.column_sum(LedgerQuantity(q), s)) > 1e-10 * kT)
                bad.push_back(std::string("column step ") + std::to_string(s + 1) + " " +
                              qname[q] + " does not close");
    }
    for (int q = 0; q < 3; ++q)
        for (int s = 0; s < 4; ++s)
            if (s != 1 && lg.cells[1][q][s] != 0.0)
                bad.push_back("device entry outside step II");
    for (int s = 0; s < 4; ++s)
        if (std::abs(lg.cells[2][2][s] + lg.cells[0][2][s]) > 1e-12 * kT)
            bad.push_back("bath dU does not mirror system dU at step " + std::to_string(s + 1));
    if (std::abs(lg.net_extractable_work()) > 1e-12 * kT)
        bad.push_back("net extractable work is nonzero");
    return bad;
}

/// Information-theoretic bound W_ext <= -dF + kT I on the extractable work.
inline double extractable_work_bound(double delta_f, double mutual_information_nats,
                                     double temperature, const PhysicalConstants& c = {}) {
    if (!(mutual_information_nats >= 0.0))
        throw DomainError("mutual information must be non-negative");
    return -delta_f + thermal_energy(temperature, c) * mutual_information_nats;
}

}  // namespace szilard
