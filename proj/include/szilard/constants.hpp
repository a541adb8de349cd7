#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "szilard/errors.hpp"

namespace szilard {

/// Fundamental constants in SI units. Defaults are CODATA 2018; the particle
/// mass defaults to the bare electron mass.
struct PhysicalConstants {
    double h = 6.62607015e-34;      // Planck constant, J s (exact)
    double k = 1.380649e-23;        // Boltzmann constant, J/K (exact)
    double m = 9.1093837015e-31;    // particle mass, kg

    double hbar() const { return h / (2.0 * std::numbers::pi); }

    void validate() const {
        if (!(h > 0.0) || !(k > 0.0) || !(m > 0.0))
            throw DomainError("physical constants must be strictly positive");
    }
};

/// kT in joules. T must be positive.
inline double thermal_energy(double temperature, const PhysicalConstants& c = {}) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0 K");
    return c.k * temperature;
}

/// Inverse temperature 1/(kT) in 1/J.
inline double inverse_temperature(double temperature, const PhysicalConstants& c = {}) {
    return 1.0 / thermal_energy(temperature, c);
}

/// Thermal de Broglie wavelength h / sqrt(2 pi m k T) in metres.
inline double thermal_wavelength(double temperature, const PhysicalConstants& c = {}) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0 K");
    c.validate();
    return c.h / std::sqrt(2.0 * std::numbers::pi * c.m * c.k * temperature);
}

enum class EnergyUnit { Joule, KT, Zeptojoule };

inline EnergyUnit parse_energy_unit(const std::string& tag) {
    if (tag == "joule" || tag == "j") return EnergyUnit::Joule;
    if (tag == "kt") return EnergyUnit::KT;
    if (tag == "zj" || tag == "zeptojoule") return EnergyUnit::Zeptojoule;
    throw UsageError("unknown energy unit tag: '" + tag + "' (expected joule|kt|zj)");
}

inline std::string unit_name(EnergyUnit u) {
    switch (u) {
        case EnergyUnit::Joule: return "J";
        case EnergyUnit::KT: return "kT";
        case EnergyUnit::Zeptojoule: return "zJ";
    }
    return "?";
}

/// Convert an energy in joules to the requested unit. kT-units require T > 0.
inline double convert_energy(double energy_joule, double temperature, EnergyUnit unit,
                             const PhysicalConstants& c = {}) {
    switch (unit) {
        case EnergyUnit::Joule: return energy_joule;
        case EnergyUnit::KT: return energy_joule / thermal_energy(temperature, c);
        case EnergyUnit::Zeptojoule: return energy_joule * 1e21;
    }
    throw UsageError("unknown energy unit");
}

/// Inverse of convert_energy.
inline double convert_energy_to_joule(double value, double temperature, EnergyUnit unit,
                                      const PhysicalConstants& c = {}) {
    switch (unit) {
        case EnergyUnit::Joule: return value;
        case EnergyUnit::KT: return value * thermal_energy(temperature, c);
        case EnergyUnit::Zeptojoule: return value * 1e-21;
    }
    throw UsageError("unknown energy unit");
}

}  // namespace szilard
