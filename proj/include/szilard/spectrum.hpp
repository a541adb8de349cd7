#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "szilard/constants.hpp"
#include "szilard/errors.hpp"
#include "szilard/kahan.hpp"

namespace szilard {

enum class SpectrumKind { Analytic1D, AnalyticRect, NumericFD };

inline const char* kind_name(SpectrumKind k) {
    switch (k) {
        case SpectrumKind::Analytic1D: return "analytic-1d";
        case SpectrumKind::AnalyticRect: return "analytic-rect";
        case SpectrumKind::NumericFD: return "numeric-fd";
    }
    return "?";
}

struct SpectrumLevel {
    double energy = 0.0;  // J
    int degeneracy = 1;
};

/// Parameters of the Weyl-law tail bound attached to a truncated spectrum.
/// For a 1D box of length L the counting function is N(E) ~ L sqrt(8mE)/h;
/// for a 2D domain of area A it is N(E) <= 2 pi m A E / h^2 (Berezin-Li-Yau),
/// so the Boltzmann weight above the cutoff is bounded by a Gaussian integral
/// (1D) or an exponential (2D). dimension 0 declares the level list complete.
struct TailModel {
    int dimension = 1;
    double length = 0.0;  // 1D box length, m
    double area = 0.0;    // 2D domain area, m^2

    static TailModel none() { return {0, 0.0, 0.0}; }
};

struct Spectrum {
    std::vector<SpectrumLevel> levels;  // strictly ascending energies
    SpectrumKind kind = SpectrumKind::Analytic1D;
    double cutoff = 0.0;  // E_max used when building the list, J
    TailModel tail;

    bool empty() const { return levels.empty(); }
    double ground() const {
        if (levels.empty()) throw EmptySpectrumError("spectrum has no levels");
        return levels.front().energy;
    }
    std::size_t level_count() const {
        std::size_t n = 0;
        for (const auto& lv : levels) n += std::size_t(lv.degeneracy);
        return n;
    }

    /// ln of the absolute Boltzmann weight bound for the unretained tail,
    /// Sum_{E>cutoff} e^{-E/kT}, from the Weyl-law counting bound with a
    /// factor-2 safety margin. Log form so deep-confinement underflow cannot
    /// turn the bound into 0/0.
    double log_tail_weight_abs(double temperature, const PhysicalConstants& c = {}) const {
        const double kT = thermal_energy(temperature, c);
        auto log_erfc = [](double x) {
            if (x < 25.0) return std::log(std::erfc(x));
            return -x * x - std::log(x * std::sqrt(std::numbers::pi));  // asymptotic
        };
        if (tail.dimension == 0) return -1e300;  // declared complete
        if (tail.dimension == 1) {
            if (!(tail.length > 0.0)) return -1e300;
            // sum_{n>N} e^{-a n^2} <= int_N^inf e^{-a x^2} dx, a = E1/kT
            const double e1 = c.h * c.h / (8.0 * c.m * tail.length * tail.length);
            const double a = e1 / kT;
            const double n_cut = std::sqrt(std::max(cutoff, 0.0) / e1);
            return std::log(std::sqrt(std::numbers::pi / a) / 2.0) +
                   log_erfc(std::sqrt(a) * n_cut);
        }
        if (!(tail.area > 0.0)) return -1e300;  // empty sub-domain contributes nothing
        const double rho = 2.0 * std::numbers::pi * c.m * tail.area / (c.h * c.h);  // per J
        return std::log(2.0 * rho * kT) - cutoff / kT;
    }

    double tail_weight_abs(double temperature, const PhysicalConstants& c = {}) const {
        return std::exp(log_tail_weight_abs(temperature, c));
    }
};

namespace detail {
/// Sorts raw (energy, degeneracy) entries ascending and merges entries equal
/// within `rel_tol` relative tolerance into one level with summed degeneracy.
inline std::vector<SpectrumLevel> merge_levels(std::vector<SpectrumLevel> raw, double rel_tol) {
    std::sort(raw.begin(), raw.end(),
              [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.energy < b.energy; });
    std::vector<SpectrumLevel> out;
    out.reserve(raw.size());
    for (const auto& lv : raw) {
        if (!out.empty() && lv.energy - out.back().energy <= rel_tol * std::abs(lv.energy)) {
            out.back().degeneracy += lv.degeneracy;
        } else {
            out.push_back(lv);
        }
    }
    return out;
}
}  // namespace detail

/// Combines spectra of independent sub-domains into one ensemble (exact ties
/// merge into degeneracies). Cutoff/tail come from the most conservative input.
inline Spectrum merge_spectra(const Spectrum& a, const Spectrum& b, double rel_tol = 1e-12) {
    Spectrum out;
    out.kind = a.kind;
    out.cutoff = std::min(a.cutoff, b.cutoff);
    std::vector<SpectrumLevel> raw = a.levels;
    raw.insert(raw.end(), b.levels.begin(), b.levels.end());
    out.levels = detail::merge_levels(std::move(raw), rel_tol);
    out.tail = a.tail;
    if (a.tail.dimension == 2 && b.tail.dimension == 2)
        out.tail.area = a.tail.area + b.tail.area;
    else if (a.tail.dimension == 1 && b.tail.dimension == 1)
        out.tail.length = a.tail.length + b.tail.length;
    return out;
}

/// Scalar samples on the full node grid (nx+1) x (ny+1), boundary included,
/// stored row-major with x fastest. Units of `values` are 1/m^2 for densities.
struct ScalarField {
    int nx = 0;  // cells along x -> nx+1 node columns
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    std::vector<double> values;

    double& at(int ix, int iy) { return values[std::size_t(iy) * (nx + 1) + ix]; }
    double at(int ix, int iy) const { return values[std::size_t(iy) * (nx + 1) + ix]; }

    /// Discrete integral with the trapezoid weights degenerate to h*h since
    /// boundary values are zero for every field produced here.
    double integral() const {
        KahanSum s;
        for (double v : values) s += v;
        return s * hx * hy;
    }
};

/// Spectrum plus unit-normalized eigenfunction samples for each retained level
/// (flattened over degeneracy: one field per level copy).
struct EigenBasis {
    Spectrum spectrum;
    std::vector<double> energies;       // flattened, ascending, one per field
    std::vector<ScalarField> fields;    // may be empty if only values were requested
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;

    bool has_fields() const { return !fields.empty(); }
};

}  // namespace szilard
