#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "szilard/analytic.hpp"
#include "szilard/geometry.hpp"
#include "szilard/solver2d.hpp"
#include "szilard/thermo.hpp"

namespace szilard {

struct SweepOptions {
    double cutoff_multiplier = 40.0;  // E_max = E_rect_ground + C kT, fixed per sweep
    int workers = 1;                  // points are independent; assembly stays ordered
    SolverOptions solver;
};

struct SweepPointStatus {
    bool ok = false;
    std::string message;
};

/// Thermodynamic quantities along a partition-depth or partition-position
/// sweep. Arrays are index-aligned with the snapped abscissa.
struct SweepCurve {
    std::string abscissa_name;     // "d" or "l"
    double temperature = 0.0;      // K
    bool localized = false;
    double grid_hx = 0.0, grid_hy = 0.0;
    std::vector<double> abscissa;  // m, snapped to the grid, strictly increasing
    std::vector<double> f;         // J
    std::vector<double> s;         // J/K
    std::vector<double> u;         // J
    std::vector<SweepPointStatus> status;

    bool all_ok() const {
        for (const auto& st : status)
            if (!st.ok) return false;
        return true;
    }
};

namespace detail {

template <typename PerPoint>
inline void run_points(std::size_t count, int workers, PerPoint&& body) {
    const int nw = std::max(1, workers);
    if (nw == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nw) - 1);
    for (int t = 1; t < nw; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
}

inline void store_point(SweepCurve& curve, std::size_t i, const ThermoState& st) {
    curve.f[i] = st.f;
    curve.s[i] = st.s;
    curve.u[i] = st.u;
    curve.status[i] = {true, ""};
}

inline void store_failure(SweepCurve& curve, std::size_t i, const std::string& msg) {
    curve.f[i] = curve.s[i] = curve.u[i] = std::numeric_limits<double>::quiet_NaN();
    curve.status[i] = {false, msg};
}

inline std::vector<double> snap_values(const std::vector<double>& request, double h,
                                       double lo, double hi, const char* what) {
    if (request.empty()) throw UsageError(std::string("empty ") + what + " sweep list");
    std::vector<double> out;
    out.reserve(request.size());
    for (double v : request) {
        if (!(v >= lo - 0.5 * h) || !(v <= hi + 0.5 * h))
            throw UsageError(std::string(what) + " sweep value out of range");
        const double snapped = std::clamp(std::round(v / h) * h, lo, hi);
        out.push_back(snapped);
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1]))
            throw UsageError(std::string(what) +
                             " sweep values are not strictly increasing after grid snapping");
    return out;
}

}  // namespace detail

/// Fig. 3e-g style sweep: thermodynamic state of the whole (connected) domain
/// as the partition penetrates to each depth in d_values. F(0) reproduces the
/// rectangle; F(Ly) reproduces the superposed-halves composition.
inline SweepCurve sweep_insertion(const Geometry& base, double temperature,
                                  const std::vector<double>& d_values, const GridSpec& grid,
                                  const PhysicalConstants& c = {}, SweepOptions opts = {}) {
    Geometry probe = base;
    probe.d = 0.0;
    probe.mode = OccupancyMode::FullBox;
    const SnappedGrid g0 = snap_grid(probe, grid);

    const double e_max =
        default_cutoff(box_ground_energy(base.lx, c) + box_ground_energy(base.ly, c),
                       temperature, c, opts.cutoff_multiplier);
    opts.solver.lanczos.weight_beta = inverse_temperature(temperature, c);

    SweepCurve curve;
    curve.abscissa_name = "d";
    curve.temperature = temperature;
    curve.localized = false;
    curve.grid_hx = g0.hx;
    curve.grid_hy = g0.hy;
    curve.abscissa = detail::snap_values(d_values, g0.hy, 0.0, base.ly, "depth");
    const std::size_t n = curve.abscissa.size();
    curve.f.assign(n, 0.0);
    curve.s.assign(n, 0.0);
    curve.u.assign(n, 0.0);
    curve.status.assign(n, {});

    detail::run_points(n, opts.workers, [&](std::size_t i) {
        try {
            Geometry gi = base;
            gi.d = curve.abscissa[i];
            gi.mode = OccupancyMode::FullBox;
            const EigenBasis basis = solve_partitioned_2d(gi, grid, e_max, c, opts.solver);
            detail::store_point(curve, i, thermo_state(basis.spectrum, temperature, 1, c));
        } catch (const std::exception& e) {
            detail::store_failure(curve, i, e.what());
        }
    });
    return curve;
}

/// Fig. 5/6 style sweep at full insertion (d = Ly): the partition sits at
/// each lateral position l. Superposed mode combines both compartments,
/// Z(l) = Z_left(l) + Z_right(Lx - l); localized mode keeps the left one.
/// l = Lx (or 0) recovers the full box exactly; a nonzero compartment
/// narrower than 3 grid cells cannot be represented and fails the point.
inline SweepCurve sweep_expansion(const Geometry& base, double temperature,
                                  const std::vector<double>& l_values, bool localized,
                                  const GridSpec& grid, const PhysicalConstants& c = {},
                                  SweepOptions opts = {}) {
    Geometry probe = base;
    probe.d = 0.0;
    probe.mode = OccupancyMode::FullBox;
    const SnappedGrid g0 = snap_grid(probe, grid);

    const double e_max =
        default_cutoff(box_ground_energy(base.lx, c) + box_ground_energy(base.ly, c),
                       temperature, c, opts.cutoff_multiplier);

    SweepCurve curve;
    curve.abscissa_name = "l";
    curve.temperature = temperature;
    curve.localized = localized;
    curve.grid_hx = g0.hx;
    curve.grid_hy = g0.hy;
    curve.abscissa = detail::snap_values(l_values, g0.hx, 0.0, base.lx, "position");
    const std::size_t n = curve.abscissa.size();
    curve.f.assign(n, 0.0);
    curve.s.assign(n, 0.0);
    curve.u.assign(n, 0.0);
    curve.status.assign(n, {});

    detail::run_points(n, opts.workers, [&](std::size_t i) {
        try {
            const int col = int(std::lround(curve.abscissa[i] / g0.hx));
            auto side_spectrum = [&](int cells, int col0) -> Spectrum {
                (void)col0;
                if (cells == 0) return Spectrum{{}, SpectrumKind::NumericFD, e_max, {2, 0.0, 0.0}};
                if (cells < 3)
                    throw GeometryError("compartment thinner than 3 grid cells");
                try {
                    return fd_rect_spectrum(cells, g0.hx, g0.ny, g0.hy, e_max, c);
                } catch (const EmptySpectrumError&) {
                    // Narrow compartment whose ground level exceeds the cutoff:
                    // its Boltzmann weight is below the tail budget by the same
                    // Weyl bound, so it contributes nothing.
                    Spectrum empty;
                    empty.kind = SpectrumKind::NumericFD;
                    empty.cutoff = e_max;
                    empty.tail = TailModel{2, 0.0, double(cells) * g0.hx * base.ly};
                    return empty;
                }
            };
            const Spectrum left = side_spectrum(col, 0);
            const Spectrum right = side_spectrum(g0.nx - col, col);
            Spectrum combined;
            if (localized) {
                if (col == 0)
                    throw GeometryError("localized compartment has zero width at l = 0");
                combined = left;
            } else {
                combined = merge_spectra(left, right);
            }
            if (combined.empty())
                throw EmptySpectrumError("no levels below the cutoff at this position");
            detail::store_point(curve, i, thermo_state(combined, temperature, 1, c));
        } catch (const std::exception& e) {
            detail::store_failure(curve, i, e.what());
        }
    });
    return curve;
}

/// Uniformly spaced sweep abscissae including both endpoints.
inline std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw UsageError("sweep needs at least one point");
    if (points == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        out[std::size_t(i)] = lo + (hi - lo) * double(i) / double(points - 1);
    return out;
}

}  // namespace szilard
