#pragma once

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "szilard/fd.hpp"
#include "szilard/geometry.hpp"
#include "szilard/lanczos.hpp"
#include "szilard/spectrum.hpp"

namespace szilard {

enum class SolveMethod {
    Auto,       // separable where the domain is (two) rectangle(s), sparse otherwise
    Sparse,     // always assemble and iterate, including on separable domains
    Separable,  // closed-form tensor spectra; errors on non-separable domains
};

struct SolverOptions {
    SolveMethod method = SolveMethod::Auto;
    bool want_vectors = false;
    bool use_mirror = true;  // exploit the l = Lx/2 reflection symmetry
    LanczosOptions lanczos;
};

namespace detail {

/// Interior-node index map; -1 marks Dirichlet nodes (walls implicitly,
/// partition nodes explicitly). Column range is [1, icol_max].
struct NodeMap {
    int icol_max = 0;
    int ny = 0;
    std::vector<long> index;
    long count = 0;

    long at(int i, int j) const {
        if (i < 1 || i > icol_max || j < 1 || j > ny - 1) return -1;
        return index[std::size_t(j - 1) * icol_max + (i - 1)];
    }
};

inline NodeMap build_node_map(const SnappedGrid& g, int icol_max, bool exclude_partition) {
    NodeMap m;
    m.icol_max = icol_max;
    m.ny = g.ny;
    m.index.assign(std::size_t(icol_max) * (g.ny - 1), -1);
    long next = 0;
    for (int j = 1; j < g.ny; ++j) {
        const bool partition_row = exclude_partition && g.part_cells > 0 &&
                                   j >= g.ny - g.part_cells;
        for (int i = 1; i <= icol_max; ++i) {
            if (partition_row && i == g.part_col) continue;
            m.index[std::size_t(j - 1) * icol_max + (i - 1)] = next++;
        }
    }
    m.count = next;
    return m;
}

/// 5-point Dirichlet Hamiltonian (hbar^2/2m scaling) on the mapped nodes.
/// With mirror_line_col > 0 the bond between columns (c-1, c) carries the
/// sqrt(2) weight of the even-reflection similarity transform.
inline SparseSym assemble(const NodeMap& m, double hx, double hy, const PhysicalConstants& c,
                          int mirror_line_col = 0) {
    const double u = kinetic_coefficient(c);
    const double cx = u / (hx * hx), cy = u / (hy * hy);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(std::size_t(5) * m.count);
    auto xbond = [&](int left_col) {
        return (mirror_line_col > 0 && left_col == mirror_line_col - 1)
                   ? std::numbers::sqrt2 * cx
                   : cx;
    };
    for (int j = 1; j < m.ny; ++j)
        for (int i = 1; i <= m.icol_max; ++i) {
            const long row = m.at(i, j);
            if (row < 0) continue;
            trips.emplace_back(row, row, 2.0 * (cx + cy));
            auto couple = [&](int ii, int jj, double w) {
                const long col = m.at(ii, jj);
                if (col >= 0) trips.emplace_back(row, col, -w);
            };
            couple(i - 1, j, xbond(i - 1));
            couple(i + 1, j, xbond(i));
            couple(i, j - 1, cy);
            couple(i, j + 1, cy);
        }
    SparseSym a(m.count, m.count);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

inline Spectrum spectrum_from_values(std::vector<double> values, double e_max, double area) {
    std::vector<SpectrumLevel> raw;
    raw.reserve(values.size());
    for (double v : values) raw.push_back({v, 1});
    Spectrum s;
    s.kind = SpectrumKind::NumericFD;
    s.cutoff = e_max;
    s.tail = TailModel{2, 0.0, area};
    s.levels = merge_levels(std::move(raw), 1e-12);
    return s;
}

inline ScalarField zero_field(const SnappedGrid& g) {
    ScalarField f;
    f.nx = g.nx;
    f.ny = g.ny;
    f.hx = g.hx;
    f.hy = g.hy;
    f.values.assign(std::size_t(g.nx + 1) * (g.ny + 1), 0.0);
    return f;
}

inline void normalize_field(ScalarField& f) {
    KahanSum s2;
    for (double v : f.values) s2 += v * v;
    const double norm = std::sqrt(double(s2) * f.hx * f.hy);
    for (double& v : f.values) v /= norm;
    // deterministic sign: largest-magnitude sample positive
    double best = 0.0;
    for (double v : f.values)
        if (std::abs(v) > std::abs(best)) best = v;
    if (best < 0.0)
        for (double& v : f.values) v = -v;
}

/// Separable product eigenfunctions of a sub-rectangle occupying grid columns
/// [col0, col0 + nxs], embedded as zero elsewhere.
inline void append_rect_modes(EigenBasis& basis, const SnappedGrid& g, int col0, int nxs,
                              double e_max, bool want_vectors, const PhysicalConstants& c) {
    const auto modes = fd_rect_modes(nxs, g.hx, g.ny, g.hy, e_max, c);
    for (const auto& md : modes) {
        basis.energies.push_back(md.energy);
        if (!want_vectors) continue;
        ScalarField f = zero_field(g);
        for (int j = 1; j < g.ny; ++j) {
            const double yv = fd1d_eigenvector(g.ny, g.hy, md.ky, j);
            for (int i = 1; i < nxs; ++i)
                f.at(col0 + i, j) = fd1d_eigenvector(nxs, g.hx, md.kx, i) * yv;
        }
        normalize_field(f);
        basis.fields.push_back(std::move(f));
    }
}

struct EnergyOrder {
    const std::vector<double>* e;
    bool operator()(std::size_t a, std::size_t b) const { return (*e)[a] < (*e)[b]; }
};

inline void sort_basis(EigenBasis& basis) {
    std::vector<std::size_t> order(basis.energies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), EnergyOrder{&basis.energies});
    std::vector<double> e2(order.size());
    std::vector<ScalarField> f2;
    const bool with_fields = !basis.fields.empty();
    if (with_fields) f2.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        e2[i] = basis.energies[order[i]];
        if (with_fields) f2[i] = std::move(basis.fields[order[i]]);
    }
    basis.energies = std::move(e2);
    if (with_fields) basis.fields = std::move(f2);
}

}  // namespace detail

/// Lowest eigenpairs (below e_max) of the Dirichlet Laplacian, scaled by
/// hbar^2/2m, on the rectangle minus the partition segment
/// {x = l, Ly - d <= y <= Ly}. Eigenfunctions (when requested) are unit
/// discrete-L2 normalized and vanish on walls and partition nodes. For d = Ly
/// the domain decomposes into two independent sub-rectangles.
inline EigenBasis solve_partitioned_2d(const Geometry& geom, const GridSpec& grid, double e_max,
                                       const PhysicalConstants& c = {},
                                       const SolverOptions& opts = {}) {
    const SnappedGrid g = snap_grid(geom, grid);
    EigenBasis basis;
    basis.nx = g.nx;
    basis.ny = g.ny;
    basis.hx = g.hx;
    basis.hy = g.hy;
    const double area = geom.lx * geom.ly;

    const bool has_partition = g.part_cells > 0;
    if (has_partition && (g.part_col < 4 || g.nx - g.part_col < 4))
        throw GeometryError("grid too coarse to represent the partition: fewer than 3 "
                            "interior nodes on one side");

    const bool separable_domain = g.part_cells == 0 || g.part_cells == g.ny;
    const bool use_separable =
        opts.method == SolveMethod::Separable ||
        (opts.method == SolveMethod::Auto && separable_domain);
    if (opts.method == SolveMethod::Separable && !separable_domain)
        throw UsageError("separable solve requested for a non-separable domain (0 < d < Ly)");

    if (use_separable) {
        if (g.part_cells == 0) {
            detail::append_rect_modes(basis, g, 0, g.nx, e_max, opts.want_vectors, c);
        } else {
            detail::append_rect_modes(basis, g, 0, g.part_col, e_max, opts.want_vectors, c);
            detail::append_rect_modes(basis, g, g.part_col, g.nx - g.part_col, e_max,
                                      opts.want_vectors, c);
        }
        detail::sort_basis(basis);
    } else if (opts.use_mirror && g.nx % 2 == 0 && g.part_col == g.nx / 2) {
        // Even sector: sparse problem on columns 1..c with the sqrt(2) line bond.
        const auto even_map = detail::build_node_map(g, g.part_col, true);
        const SparseSym a_even = detail::assemble(even_map, g.hx, g.hy, c, g.part_col);
        const auto even = lanczos_below_cutoff(a_even, e_max, opts.lanczos, opts.want_vectors);
        // Odd sector: Dirichlet on the whole symmetry line, i.e. the plain
        // left-half rectangle, available in closed form.
        const auto odd_modes = detail::fd_rect_modes(g.part_col, g.hx, g.ny, g.hy, e_max, c);

        for (std::size_t kidx = 0; kidx < even.eigenvalues.size(); ++kidx) {
            basis.energies.push_back(even.eigenvalues[kidx]);
            if (!opts.want_vectors) continue;
            ScalarField f = detail::zero_field(g);
            const int cc = g.part_col;
            for (int j = 1; j < g.ny; ++j)
                for (int i = 1; i <= cc; ++i) {
                    const long row = even_map.at(i, j);
                    if (row < 0) continue;
                    const double v = even.vectors(row, long(kidx));
                    if (i == cc) {
                        f.at(cc, j) = std::numbers::sqrt2 * v;
                    } else {
                        f.at(i, j) = v;
                        f.at(2 * cc - i, j) = v;
                    }
                }
            detail::normalize_field(f);
            basis.fields.push_back(std::move(f));
        }
        for (const auto& md : odd_modes) {
            basis.energies.push_back(md.energy);
            if (!opts.want_vectors) continue;
            ScalarField f = detail::zero_field(g);
            const int cc = g.part_col;
            for (int j = 1; j < g.ny; ++j) {
                const double yv = fd1d_eigenvector(g.ny, g.hy, md.ky, j);
                for (int i = 1; i < cc; ++i) {
                    const double v = fd1d_eigenvector(cc, g.hx, md.kx, i) * yv;
                    f.at(i, j) = v;
                    f.at(2 * cc - i, j) = -v;
                }
            }
            detail::normalize_field(f);
            basis.fields.push_back(std::move(f));
        }
        detail::sort_basis(basis);
    } else {
        const auto node_map = detail::build_node_map(g, g.nx - 1, true);
        const SparseSym a = detail::assemble(node_map, g.hx, g.hy, c, 0);
        const auto res = lanczos_below_cutoff(a, e_max, opts.lanczos, opts.want_vectors);
        basis.energies = res.eigenvalues;
        if (opts.want_vectors) {
            basis.fields.reserve(res.eigenvalues.size());
            for (long k = 0; k < long(res.eigenvalues.size()); ++k) {
                ScalarField f = detail::zero_field(g);
                for (int j = 1; j < g.ny; ++j)
                    for (int i = 1; i < g.nx; ++i) {
                        const long row = node_map.at(i, j);
                        if (row >= 0) f.at(i, j) = res.vectors(row, k);
                    }
                detail::normalize_field(f);
                basis.fields.push_back(std::move(f));
            }
        }
    }

    if (basis.energies.empty())
        throw EmptySpectrumError("energy cutoff lies below the ground level of the "
                                 "partitioned domain");
    basis.spectrum = detail::spectrum_from_values(basis.energies, e_max, area);
    return basis;
}

}  // namespace szilard
