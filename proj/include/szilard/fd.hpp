#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "szilard/constants.hpp"
#include "szilard/errors.hpp"
#include "szilard/spectrum.hpp"

namespace szilard {

/// Kinetic-energy prefactor hbar^2 / (2m) in J m^2.
inline double kinetic_coefficient(const PhysicalConstants& c = {}) {
    const double hbar = c.hbar();
    return hbar * hbar / (2.0 * c.m);
}

/// Eigenvalues of the 1D Dirichlet 3-point Laplacian (times hbar^2/2m) on a
/// uniform grid with n_cells cells of width h:
///   E_k = (2u/h^2) (1 - cos(k pi / N)),  k = 1..N-1.
/// These are exactly the values an iterative solver on the same grid returns.
inline double fd1d_level(int n_cells, double h, int k, const PhysicalConstants& c = {}) {
    const double u = kinetic_coefficient(c);
    return 2.0 * u / (h * h) * (1.0 - std::cos(double(k) * std::numbers::pi / double(n_cells)));
}

inline std::vector<double> fd1d_levels(int n_cells, double h, double e_max,
                                       const PhysicalConstants& c = {}) {
    std::vector<double> out;
    for (int k = 1; k < n_cells; ++k) {
        const double e = fd1d_level(n_cells, h, k, c);
        if (e > e_max) break;  // dispersion is increasing in k
        out.push_back(e);
    }
    return out;
}

/// Discrete-L2-normalized 1D eigenvector sample: psi_k(i) = sqrt(2/(N h)) sin(k pi i / N).
inline double fd1d_eigenvector(int n_cells, double h, int k, int i) {
    return std::sqrt(2.0 / (double(n_cells) * h)) *
           std::sin(double(k) * std::numbers::pi * double(i) / double(n_cells));
}

/// Separable FD spectrum of an nx x ny cell rectangle: all sums of 1D FD
/// levels below e_max. Exactly the discrete spectrum the sparse solver sees
/// on the same grid, obtained without iteration.
inline Spectrum fd_rect_spectrum(int nx, double hx, int ny, double hy, double e_max,
                                 const PhysicalConstants& c = {}) {
    if (nx < 2 || ny < 2) throw GeometryError("rectangle needs at least 2 cells per side");
    const std::vector<double> ex = fd1d_levels(nx, hx, e_max, c);
    const std::vector<double> ey = fd1d_levels(ny, hy, e_max, c);
    if (ex.empty() || ey.empty() || ex.front() + ey.front() > e_max)
        throw EmptySpectrumError("energy cutoff lies below the FD rectangle ground level");
    std::vector<SpectrumLevel> raw;
    for (double vx : ex) {
        if (vx + ey.front() > e_max) break;
        for (double vy : ey) {
            const double e = vx + vy;
            if (e > e_max) break;
            raw.push_back({e, 1});
        }
    }
    Spectrum s;
    s.kind = SpectrumKind::NumericFD;
    s.cutoff = e_max;
    s.tail = TailModel{2, 0.0, double(nx) * hx * double(ny) * hy};
    s.levels = detail::merge_levels(std::move(raw), 1e-12);
    return s;
}

namespace detail {

/// Flattened (energy, kx, ky) triples of a separable FD rectangle, ascending.
struct RectMode {
    double energy;
    int kx;
    int ky;
};

inline std::vector<RectMode> fd_rect_modes(int nx, double hx, int ny, double hy, double e_max,
                                           const PhysicalConstants& c = {}) {
    const std::vector<double> ex = fd1d_levels(nx, hx, e_max, c);
    const std::vector<double> ey = fd1d_levels(ny, hy, e_max, c);
    std::vector<RectMode> modes;
    for (int ix = 0; ix < int(ex.size()); ++ix) {
        if (ex[ix] + (ey.empty() ? 0.0 : ey.front()) > e_max) break;
        for (int iy = 0; iy < int(ey.size()); ++iy) {
            const double e = ex[ix] + ey[iy];
            if (e > e_max) break;
            modes.push_back({e, ix + 1, iy + 1});
        }
    }
    std::sort(modes.begin(), modes.end(), [](const RectMode& a, const RectMode& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.kx != b.kx) return a.kx < b.kx;
        return a.ky < b.ky;
    });
    return modes;
}

}  // namespace detail

}  // namespace szilard
