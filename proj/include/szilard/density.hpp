#pragma once

#include <cmath>
#include <cstdio>

#include "szilard/constants.hpp"
#include "szilard/errors.hpp"
#include "szilard/spectrum.hpp"
#include "szilard/thermo.hpp"

namespace szilard {

/// Thermal probability density n(r) = Z^-1 sum_n e^{-beta E_n} |psi_n(r)|^2
/// over the retained eigenbasis. Integrates to one on the grid; vanishes on
/// walls and partition nodes because every retained eigenfunction does.
inline ScalarField density_map(const EigenBasis& basis, double temperature,
                               const PhysicalConstants& c = {}) {
    if (!basis.has_fields())
        throw UsageError("density_map needs an eigenbasis built with want_vectors");
    if (basis.energies.size() != basis.fields.size())
        throw UsageError("eigenbasis fields do not match its energy list");
    const double beta = inverse_temperature(temperature, c);
    const double e0 = basis.energies.front();

    KahanSum z0;
    for (double e : basis.energies) z0 += std::exp(-beta * (e - e0));

    // Tail control: levels beyond the cutoff would be missing mass here.
    const double log_tail_rel =
        basis.spectrum.log_tail_weight_abs(temperature, c) + beta * e0 - std::log(z0);
    if (!(log_tail_rel < std::log(kTailBudget))) {
        const double kT = thermal_energy(temperature, c);
        const double required =
            basis.spectrum.cutoff +
            kT * std::max(log_tail_rel - std::log(kTailBudget), 0.0);
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "eigenbasis cutoff leaves a Boltzmann tail above budget for the density "
                      "map; raise the cutoff to ~%.6g J",
                      required);
        throw TruncationError(msg, required);
    }

    ScalarField out;
    out.nx = basis.nx;
    out.ny = basis.ny;
    out.hx = basis.hx;
    out.hy = basis.hy;
    out.values.assign(std::size_t(basis.nx + 1) * (basis.ny + 1), 0.0);
    std::vector<KahanSum> acc(out.values.size());
    for (std::size_t k = 0; k < basis.fields.size(); ++k) {
        const double w = std::exp(-beta * (basis.energies[k] - e0)) / z0;
        const auto& v = basis.fields[k].values;
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += w * v[i] * v[i];
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = acc[i];
    return out;
}

}  // namespace szilard
