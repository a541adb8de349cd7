#pragma once

#include <cmath>
#include <vector>

#include "szilard/constants.hpp"
#include "szilard/errors.hpp"
#include "szilard/spectrum.hpp"

namespace szilard {

/// Ground level h^2/(8 m L^2) of the 1D box.
inline double box_ground_energy(double length, const PhysicalConstants& c = {}) {
    if (!(length > 0.0)) throw DomainError("box length must be positive");
    return c.h * c.h / (8.0 * c.m * length * length);
}

/// 1D particle-in-a-box levels E_n = n^2 h^2 / (8 m L^2) up to e_max.
inline Spectrum energies_1d(double length, double e_max, const PhysicalConstants& c = {}) {
    const double e1 = box_ground_energy(length, c);
    if (!(e_max >= e1))
        throw EmptySpectrumError("energy cutoff lies below the 1D ground level");
    Spectrum s;
    s.kind = SpectrumKind::Analytic1D;
    s.cutoff = e_max;
    s.tail = TailModel{1, length, 0.0};
    const long n_max = long(std::sqrt(e_max / e1));
    s.levels.reserve(std::size_t(n_max));
    for (long n = 1; n <= n_max; ++n) {
        const double e = e1 * double(n) * double(n);
        if (e > e_max) break;
        s.levels.push_back({e, 1});
    }
    return s;
}

/// Separable spectrum of the Lx x Ly rectangle: all sums E_nx(Lx) + E_ny(Ly)
/// below e_max, ascending, accidental degeneracies merged at 1e-12 relative.
inline Spectrum energies_rect(double lx, double ly, double e_max,
                              const PhysicalConstants& c = {}) {
    const double ex1 = box_ground_energy(lx, c);
    const double ey1 = box_ground_energy(ly, c);
    if (!(e_max >= ex1 + ey1))
        throw EmptySpectrumError("energy cutoff lies below the rectangle ground level");
    std::vector<SpectrumLevel> raw;
    for (long nx = 1;; ++nx) {
        const double ex = ex1 * double(nx) * double(nx);
        if (ex + ey1 > e_max) break;
        for (long ny = 1;; ++ny) {
            const double e = ex + ey1 * double(ny) * double(ny);
            if (e > e_max) break;
            raw.push_back({e, 1});
        }
    }
    Spectrum s;
    s.kind = SpectrumKind::AnalyticRect;
    s.cutoff = e_max;
    s.tail = TailModel{2, 0.0, lx * ly};
    s.levels = detail::merge_levels(std::move(raw), 1e-12);
    return s;
}

/// Cutoff E_ground + C kT used throughout: e^-40 ~ 4e-18 leaves the Boltzmann
/// tail far below every tolerance in the test suite.
inline double default_cutoff(double ground, double temperature, const PhysicalConstants& c = {},
                             double c_multiplier = 40.0) {
    return ground + c_multiplier * thermal_energy(temperature, c);
}

}  // namespace szilard
