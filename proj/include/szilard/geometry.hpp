#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "szilard/errors.hpp"

namespace szilard {

/// How the particle occupies a (possibly partitioned) box.
enum class OccupancyMode { FullBox, SuperposedHalves, LocalizedLeft, LocalizedRight };

inline std::string mode_name(OccupancyMode m) {
    switch (m) {
        case OccupancyMode::FullBox: return "full-box";
        case OccupancyMode::SuperposedHalves: return "superposed-halves";
        case OccupancyMode::LocalizedLeft: return "localized-left";
        case OccupancyMode::LocalizedRight: return "localized-right";
    }
    return "?";
}

/// Rectangular box with a zero-thickness partition entering from the top wall
/// (y = Ly) down to depth d, at lateral position x = l. All lengths in metres.
struct Geometry {
    double lx = 20e-9;   // box length along the expansion axis
    double ly = 10e-9;   // box height
    double d = 0.0;      // partition penetration depth, 0 <= d <= ly
    double l = 10e-9;    // partition lateral position, 0 < l < lx
    OccupancyMode mode = OccupancyMode::FullBox;

    bool fully_divided() const { return d >= ly; }

    void validate() const {
        if (!(lx > 0.0) || !(ly > 0.0)) throw GeometryError("box dimensions must be positive");
        if (!(d >= 0.0) || !(d <= ly)) throw GeometryError("partition depth must lie in [0, Ly]");
        if (!(l > 0.0) || !(l < lx)) throw GeometryError("partition position must lie in (0, Lx)");
        if (mode != OccupancyMode::FullBox && !fully_divided())
            throw GeometryError(mode_name(mode) +
                                " occupancy requires a fully dividing partition (d = Ly)");
    }
};

/// Requested grid spacings. Effective spacings are adjusted so an integer
/// number of cells spans each box side; partition coordinates snap to the
/// nearest grid line and the snapped values are reported back.
struct GridSpec {
    double hx = 0.05e-9;
    double hy = 0.05e-9;

    void validate() const {
        if (!(hx > 0.0) || !(hy > 0.0)) throw GeometryError("grid spacings must be positive");
    }
};

/// A GridSpec resolved against a concrete Geometry.
struct SnappedGrid {
    int nx = 0;          // cells along x; interior columns are 1..nx-1
    int ny = 0;          // cells along y; interior rows are 1..ny-1
    double hx = 0.0;     // effective spacing, lx / nx
    double hy = 0.0;
    int part_col = 0;    // grid column index of the partition (l = part_col * hx)
    int part_cells = 0;  // partition depth in cells (d = part_cells * hy)

    double snapped_l() const { return part_col * hx; }
    double snapped_d() const { return part_cells * hy; }
    long interior_nodes() const { return long(nx - 1) * long(ny - 1); }
};

inline SnappedGrid snap_grid(const Geometry& g, const GridSpec& spec) {
    g.validate();
    spec.validate();
    SnappedGrid out;
    out.nx = std::max(2, int(std::lround(g.lx / spec.hx)));
    out.ny = std::max(2, int(std::lround(g.ly / spec.hy)));
    out.hx = g.lx / out.nx;
    out.hy = g.ly / out.ny;
    out.part_col = std::clamp(int(std::lround(g.l / out.hx)), 1, out.nx - 1);
    out.part_cells = std::clamp(int(std::lround(g.d / out.hy)), 0, out.ny);
    return out;
}

}  // namespace szilard
