#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "szilard/analytic.hpp"
#include "szilard/solver2d.hpp"

using namespace szilard;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const PhysicalConstants c;

Geometry box(double d_nm, double l_nm = 10.0) {
    Geometry g;
    g.lx = 20e-9;
    g.ly = 10e-9;
    g.d = d_nm * 1e-9;
    g.l = l_nm * 1e-9;
    return g;
}

/// Cutoff placed mid-gap above the k-th flattened analytic rectangle level.
double cutoff_for_levels(double lx, double ly, std::size_t k) {
    const Spectrum s = energies_rect(lx, ly, 80.0 * box_ground_energy(ly, c), c);
    std::vector<double> flat;
    for (const auto& lv : s.levels)
        for (int i = 0; i < lv.degeneracy; ++i) flat.push_back(lv.energy);
    REQUIRE(flat.size() > k + 1);
    return 0.5 * (flat[k] + flat[k + 1]);
}
}  // namespace

TEST_CASE("closed-form grid dispersion matches a dense tridiagonal solve") {
    const int n_cells = 40;
    const double h = 0.25e-9;
    const auto dense = oracle::fd1d_dense_eigs(n_cells, h);
    for (int k = 1; k < n_cells; ++k)
        CHECK_THAT(fd1d_level(n_cells, h, k, c), WithinRel(dense[std::size_t(k - 1)], 1e-11));
}

TEST_CASE("sparse path reproduces the separable spectrum on the rectangle") {
    const GridSpec grid{0.25e-9, 0.25e-9};
    const double e_max = cutoff_for_levels(20e-9, 10e-9, 14);

    SolverOptions sep;
    sep.method = SolveMethod::Separable;
    SolverOptions sparse;
    sparse.method = SolveMethod::Sparse;

    const EigenBasis a = solve_partitioned_2d(box(0.0), grid, e_max, c, sep);
    const EigenBasis b = solve_partitioned_2d(box(0.0), grid, e_max, c, sparse);
    REQUIRE(a.energies.size() == b.energies.size());
    for (std::size_t i = 0; i < a.energies.size(); ++i)
        CHECK_THAT(b.energies[i], WithinRel(a.energies[i], 1e-9));
}

TEST_CASE("sparse rectangle levels approach the analytic spectrum") {
    const GridSpec grid{0.1e-9, 0.1e-9};
    const double e_max = cutoff_for_levels(20e-9, 10e-9, 10);
    SolverOptions sparse;
    sparse.method = SolveMethod::Sparse;
    const EigenBasis basis = solve_partitioned_2d(box(0.0), grid, e_max, c, sparse);

    const Spectrum exact = energies_rect(20e-9, 10e-9, e_max * 1.2, c);
    std::vector<double> flat;
    for (const auto& lv : exact.levels)
        for (int i = 0; i < lv.degeneracy; ++i) flat.push_back(lv.energy);

    REQUIRE(basis.energies.size() >= 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(std::abs(basis.energies[i] - flat[i]) / flat[i] < 5e-3);
        CHECK(basis.energies[i] < flat[i]);  // grid softening lowers every level
    }
}

TEST_CASE("mirror-sector and full-domain paths agree on a symmetric partition") {
    const GridSpec grid{0.25e-9, 0.25e-9};
    const double e_max = cutoff_for_levels(20e-9, 10e-9, 17);

    // two grid cells of opening left near the top wall
    const Geometry g = box(10.0 - 2.0 * 0.25, 10.0);

    SolverOptions full;
    full.method = SolveMethod::Sparse;
    full.use_mirror = false;
    SolverOptions mirror;
    mirror.method = SolveMethod::Sparse;
    mirror.use_mirror = true;

    const EigenBasis a = solve_partitioned_2d(g, grid, e_max, c, full);
    const EigenBasis b = solve_partitioned_2d(g, grid, e_max, c, mirror);
    REQUIRE(a.energies.size() == b.energies.size());
    for (std::size_t i = 0; i < a.energies.size(); ++i)
        CHECK_THAT(b.energies[i], WithinRel(a.energies[i], 1e-8));

}

TEST_CASE("levels pair up as the channel closes") {
    // 20 x 8 nm box: the 10 x 8 nm halves carry no internal degeneracies, so
    // the sorted levels form clean two-sided doublets.
    Geometry g;
    g.lx = 20e-9;
    g.ly = 8e-9;
    g.l = 10e-9;
    g.d = g.ly - 2.0 * 0.25e-9;  // two grid cells of opening
    const Spectrum half = energies_rect(10e-9, 8e-9, 60.0 * box_ground_energy(8e-9, c), c);
    const double e_max = 0.5 * (half.levels[2].energy + half.levels[3].energy);

    SolverOptions full;
    full.method = SolveMethod::Sparse;
    full.use_mirror = false;
    const EigenBasis b =
        solve_partitioned_2d(g, GridSpec{0.25e-9, 0.25e-9}, e_max, c, full);
    REQUIRE(b.energies.size() == 6);
    for (std::size_t p = 0; p < 3; ++p) {
        const double intra = b.energies[2 * p + 1] - b.energies[2 * p];
        const double inter = p < 2 ? b.energies[2 * p + 2] - b.energies[2 * p + 1]
                                   : b.energies[2 * p + 1] - b.energies[2 * p - 1];
        CHECK(intra < 0.1 * inter);
        CHECK_THAT(0.5 * (b.energies[2 * p] + b.energies[2 * p + 1]),
                   WithinRel(half.levels[p].energy, 1.5e-2));  // coarse-grid offset
    }
}

TEST_CASE("full insertion decomposes into two sub-rectangles") {
    const GridSpec grid{0.25e-9, 0.25e-9};
    const double e_max = cutoff_for_levels(10e-9, 10e-9, 11);

    SolverOptions sep;
    sep.method = SolveMethod::Separable;
    const EigenBasis a = solve_partitioned_2d(box(10.0), grid, e_max, c, sep);

    SolverOptions sparse;
    sparse.method = SolveMethod::Sparse;
    sparse.use_mirror = false;  // exercise block Lanczos on the disconnected domain
    const EigenBasis b = solve_partitioned_2d(box(10.0), grid, e_max, c, sparse);

    REQUIRE(a.energies.size() == b.energies.size());
    for (std::size_t i = 0; i < a.energies.size(); ++i)
        CHECK_THAT(b.energies[i], WithinRel(a.energies[i], 1e-9));

    SECTION("every half-box level appears exactly twice") {
        const Spectrum merged = a.spectrum;
        for (const auto& lv : merged.levels) CHECK(lv.degeneracy % 2 == 0);
        // flattened list pairs with zero split on the separable path
        for (std::size_t p = 0; 2 * p + 1 < a.energies.size(); ++p)
            CHECK(a.energies[2 * p + 1] - a.energies[2 * p] <=
                  1e-12 * a.energies[2 * p]);
    }
}

TEST_CASE("eigenfunctions are normalized and vanish on Dirichlet nodes") {
    const GridSpec grid{0.25e-9, 0.25e-9};
    const double e_max = cutoff_for_levels(20e-9, 10e-9, 8);
    SolverOptions opt;
    opt.method = SolveMethod::Sparse;
    opt.want_vectors = true;
    opt.use_mirror = false;
    const Geometry g = box(5.0);
    const EigenBasis basis = solve_partitioned_2d(g, grid, e_max, c, opt);
    REQUIRE(basis.has_fields());
    REQUIRE(basis.fields.size() == basis.energies.size());

    const SnappedGrid sg = snap_grid(g, grid);
    for (const auto& f : basis.fields) {
        KahanSum norm2;
        for (double v : f.values) norm2 += v * v;
        CHECK_THAT(double(norm2) * f.hx * f.hy, WithinRel(1.0, 1e-10));
        for (int i = 0; i <= f.nx; ++i) {
            CHECK(f.at(i, 0) == 0.0);
            CHECK(f.at(i, f.ny) == 0.0);
        }
        for (int j = 0; j <= f.ny; ++j) {
            CHECK(f.at(0, j) == 0.0);
            CHECK(f.at(f.nx, j) == 0.0);
        }
        for (int j = sg.ny - sg.part_cells; j < sg.ny; ++j)
            CHECK(f.at(sg.part_col, j) == 0.0);
    }
}

TEST_CASE("deeper insertion never lowers a level") {
    const GridSpec grid{0.25e-9, 0.25e-9};
    const double e_max = cutoff_for_levels(20e-9, 10e-9, 8);
    SolverOptions opt;  // Auto: sector path where applicable
    std::vector<double> prev;
    for (double d_nm : {0.0, 2.0, 4.0, 6.0, 8.0, 10.0}) {
        const EigenBasis basis = solve_partitioned_2d(box(d_nm), grid, e_max, c, opt);
        if (!prev.empty()) {
            const std::size_t n = std::min(prev.size(), basis.energies.size());
            for (std::size_t i = 0; i < n; ++i)
                CHECK(basis.energies[i] >= prev[i] * (1.0 - 1e-9));
        }
        prev = basis.energies;
    }
}

TEST_CASE("discretization error shrinks at second order") {
    std::vector<double> hs = {0.4e-9, 0.2e-9, 0.1e-9};
    const double e_max = cutoff_for_levels(20e-9, 10e-9, 10);
    const Spectrum exact = energies_rect(20e-9, 10e-9, e_max * 1.2, c);
    std::vector<double> flat;
    for (const auto& lv : exact.levels)
        for (int i = 0; i < lv.degeneracy; ++i) flat.push_back(lv.energy);

    std::vector<double> errs;
    for (double h : hs) {
        SolverOptions sep;
        sep.method = SolveMethod::Separable;
        const EigenBasis basis =
            solve_partitioned_2d(box(0.0), GridSpec{h, h}, e_max, c, sep);
        double err = 0.0;
        for (std::size_t i = 0; i < 10; ++i)
            err += std::abs(basis.energies[i] - flat[i]) / flat[i];
        errs.push_back(err / 10.0);
    }
    for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
        const double slope = std::log(errs[i] / errs[i + 1]) / std::log(hs[i] / hs[i + 1]);
        CHECK(slope > 1.8);
        CHECK(slope < 2.2);
    }
}

TEST_CASE("geometry and solver error paths") {
    const GridSpec grid{0.25e-9, 0.25e-9};
    const double e_max = cutoff_for_levels(20e-9, 10e-9, 6);

    SECTION("partition too close to a wall") {
        CHECK_THROWS_AS(solve_partitioned_2d(box(5.0, 0.5), grid, e_max, c, SolverOptions{}),
                        GeometryError);
    }
    SECTION("separable solve on a non-separable domain is a usage error") {
        SolverOptions sep;
        sep.method = SolveMethod::Separable;
        CHECK_THROWS_AS(solve_partitioned_2d(box(5.0), grid, e_max, c, sep), UsageError);
    }
    SECTION("cutoff below the ground level") {
        CHECK_THROWS_AS(
            solve_partitioned_2d(box(0.0), grid, 0.5 * oracle::frozen::rect_ground_20x10, c,
                                 SolverOptions{}),
            EmptySpectrumError);
    }
    SECTION("a starved Krylov basis reports iteration counts") {
        SolverOptions opt;
        opt.method = SolveMethod::Sparse;
        opt.use_mirror = false;
        opt.lanczos.max_basis = 4;
        const double wide = cutoff_for_levels(20e-9, 10e-9, 30);
        try {
            solve_partitioned_2d(box(5.0), grid, wide, c, opt);
            FAIL("expected SolverError");
        } catch (const SolverError& e) {
            CHECK(e.basis > 0);
            CHECK(std::string(e.what()).find("basis") != std::string::npos);
        }
    }
}

TEST_CASE("snapping reports effective partition coordinates") {
    Geometry g = box(3.99, 10.07);
    const SnappedGrid sg = snap_grid(g, GridSpec{0.25e-9, 0.25e-9});
    CHECK(sg.nx == 80);
    CHECK(sg.ny == 40);
    CHECK_THAT(sg.snapped_d(), WithinRel(4.0e-9, 1e-12));
    CHECK_THAT(sg.snapped_l(), WithinRel(10.0e-9, 1e-12));
}
