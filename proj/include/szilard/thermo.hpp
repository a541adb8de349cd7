#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "szilard/constants.hpp"
#include "szilard/errors.hpp"
#include "szilard/kahan.hpp"
#include "szilard/spectrum.hpp"

namespace szilard {

/// Relative Boltzmann weight allowed above the spectrum cutoff.
inline constexpr double kTailBudget = 1e-15;

namespace detail {

/// Boltzmann sums with the ground-state weight factored out:
///   z0 = sum_n g_n e^{-beta(E_n - E0)}      (>= 1)
///   u  = E0 + sum_n g_n (E_n-E0) e^{-beta(E_n-E0)} / z0
/// Compensated accumulation keeps the 1e-12 identity tolerances.
struct ReducedSums {
    double ground = 0.0;
    double z0 = 0.0;
    double mean_energy = 0.0;
};

inline ReducedSums boltzmann_sums(const Spectrum& s, double temperature,
                                  const PhysicalConstants& c) {
    if (s.empty()) throw EmptySpectrumError("cannot form thermal sums over an empty spectrum");
    const double beta = inverse_temperature(temperature, c);
    const double e0 = s.ground();
    KahanSum z0, ew;
    for (const auto& lv : s.levels) {
        const double de = lv.energy - e0;
        const double w = double(lv.degeneracy) * std::exp(-beta * de);
        z0 += w;
        ew += w * de;
    }
    return {e0, z0, e0 + ew / z0};
}

inline void check_tail(const Spectrum& s, double temperature, double z0, double ground,
                       const PhysicalConstants& c) {
    const double beta = inverse_temperature(temperature, c);
    const double log_tail_rel =
        s.log_tail_weight_abs(temperature, c) + beta * ground - std::log(z0);
    if (!(log_tail_rel < std::log(kTailBudget))) {
        const double kT = thermal_energy(temperature, c);
        const double required =
            s.cutoff + kT * std::max(log_tail_rel - std::log(kTailBudget), 0.0);
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "spectrum cutoff %.6g J leaves a Boltzmann tail above budget; raise the "
                      "cutoff to ~%.6g J",
                      s.cutoff, required);
        throw TruncationError(msg, required);
    }
}

}  // namespace detail

/// Single-particle partition function Z = sum_n g_n e^{-beta E_n}.
/// The returned double can underflow for extreme confinement; ln Z stays
/// finite on the log path used by thermo_state.
inline double partition_function(const Spectrum& s, double temperature,
                                 const PhysicalConstants& c = {}) {
    const auto sums = detail::boltzmann_sums(s, temperature, c);
    detail::check_tail(s, temperature, sums.z0, sums.ground, c);
    return sums.z0 * std::exp(-sums.ground * inverse_temperature(temperature, c));
}

/// ln Z without intermediate underflow.
inline double log_partition_function(const Spectrum& s, double temperature,
                                     const PhysicalConstants& c = {}) {
    const auto sums = detail::boltzmann_sums(s, temperature, c);
    detail::check_tail(s, temperature, sums.z0, sums.ground, c);
    return std::log(sums.z0) - sums.ground * inverse_temperature(temperature, c);
}

/// Helmholtz free energy F = -kT ln(g Z); the side multiplicity g contributes
/// exactly -kT ln g (g = 2 reproduces the superposed-halves 2 Z(L/2)).
inline double free_energy(double z, double temperature, int multiplicity = 1,
                          const PhysicalConstants& c = {}) {
    if (!(z > 0.0)) throw DomainError("partition function must be positive");
    if (multiplicity != 1 && multiplicity != 2)
        throw DomainError("side multiplicity must be 1 or 2");
    return -thermal_energy(temperature, c) * (std::log(z) + std::log(double(multiplicity)));
}

/// Mean energy U = Z^-1 sum_n g_n E_n e^{-beta E_n}; independent of the side
/// multiplicity since both halves carry identical spectra.
inline double internal_energy(const Spectrum& s, double temperature,
                              const PhysicalConstants& c = {}) {
    const auto sums = detail::boltzmann_sums(s, temperature, c);
    detail::check_tail(s, temperature, sums.z0, sums.ground, c);
    return sums.mean_energy;
}

/// Gibbs entropy of the occupation probabilities over the g-fold ensemble:
/// S = -k sum p ln p = k (ln(g Z) + beta U).
inline double entropy(const Spectrum& s, double temperature, int multiplicity = 1,
                      const PhysicalConstants& c = {}) {
    if (multiplicity != 1 && multiplicity != 2)
        throw DomainError("side multiplicity must be 1 or 2");
    const auto sums = detail::boltzmann_sums(s, temperature, c);
    detail::check_tail(s, temperature, sums.z0, sums.ground, c);
    const double beta = inverse_temperature(temperature, c);
    const double log_gz = std::log(sums.z0) - beta * sums.ground + std::log(double(multiplicity));
    return c.k * (log_gz + beta * sums.mean_energy);
}

/// Canonical state (Z, F, S, U) of one configuration at temperature T.
struct ThermoState {
    double temperature = 0.0;  // K
    double z = 0.0;            // dimensionless (g excluded; may underflow, see log_z)
    double log_z = 0.0;        // ln Z, always finite
    double f = 0.0;            // J
    double s = 0.0;            // J/K
    double u = 0.0;            // J
    int multiplicity = 1;      // 1 = full box or localized, 2 = superposed halves
};

inline ThermoState thermo_state(const Spectrum& spec, double temperature, int multiplicity = 1,
                                const PhysicalConstants& c = {}) {
    if (multiplicity != 1 && multiplicity != 2)
        throw DomainError("side multiplicity must be 1 or 2");
    const auto sums = detail::boltzmann_sums(spec, temperature, c);
    detail::check_tail(spec, temperature, sums.z0, sums.ground, c);
    const double kT = thermal_energy(temperature, c);
    const double beta = 1.0 / kT;

    ThermoState st;
    st.temperature = temperature;
    st.multiplicity = multiplicity;
    st.log_z = std::log(sums.z0) - beta * sums.ground;
    st.z = std::exp(st.log_z);
    st.u = sums.mean_energy;
    const double log_gz = st.log_z + std::log(double(multiplicity));
    st.f = -kT * log_gz;
    st.s = c.k * (log_gz + beta * st.u);

    // F = U - T S holds by construction; re-verify against accumulated roundoff.
    const double lhs = st.f;
    const double rhs = st.u - temperature * st.s;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), kT});
    if (!(std::abs(lhs - rhs) <= 1e-12 * scale))
        throw Error("thermodynamic identity F = U - TS violated beyond 1e-12");
    return st;
}

}  // namespace szilard
