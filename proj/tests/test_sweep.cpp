#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "szilard/cycle.hpp"
#include "szilard/fd.hpp"
#include "szilard/sweep.hpp"

using namespace szilard;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const PhysicalConstants c;
const GridSpec kCoarse{0.25e-9, 0.25e-9};

Geometry base_box() {
    Geometry g;
    g.lx = 20e-9;
    g.ly = 10e-9;
    g.l = 10e-9;
    return g;
}

ThermoState fd_state(int nx_cells, double e_max, int g_mult, double t = 300.0) {
    const Spectrum s = fd_rect_spectrum(nx_cells, 0.25e-9, 40, 0.25e-9, e_max, c);
    return thermo_state(s, t, g_mult, c);
}
}  // namespace

TEST_CASE("insertion sweep on a coarse grid") {
    const Geometry g = base_box();
    const auto d_list = linspace(0.0, g.ly, 11);
    const SweepCurve curve = sweep_insertion(g, 300.0, d_list, kCoarse, c, {});

    REQUIRE(curve.abscissa.size() == 11);
    CHECK(curve.all_ok());
    CHECK(curve.abscissa_name == "d");

    SECTION("abscissa is snapped and strictly increasing") {
        for (std::size_t i = 1; i < curve.abscissa.size(); ++i)
            CHECK(curve.abscissa[i] > curve.abscissa[i - 1]);
        CHECK(curve.abscissa.front() == 0.0);
        CHECK_THAT(curve.abscissa.back(), WithinRel(g.ly, 1e-12));
    }

    SECTION("free energy never decreases with depth") {
        for (std::size_t i = 1; i < curve.f.size(); ++i)
            CHECK(curve.f[i] >= curve.f[i - 1] - 1e-12 * oracle::frozen::kt_300k);
    }

    const double e_max = default_cutoff(
        box_ground_energy(g.lx, c) + box_ground_energy(g.ly, c), 300.0, c, 40.0);

    SECTION("endpoints recover the separable states") {
        CHECK_THAT(curve.f.front(), WithinRel(fd_state(80, e_max, 1).f, 1e-12));
        // full insertion == two superposed halves == multiplicity-2 half box
        CHECK_THAT(curve.f.back(), WithinRel(fd_state(40, e_max, 2).f, 1e-12));
        CHECK_THAT(curve.s.back(),
                   WithinRel(fd_state(40, e_max, 2).s, 1e-12));
    }

    SECTION("depth span reproduces the 1D insertion work up to grid error") {
        const double w_2d = curve.f.back() - curve.f.front();
        const StepExchange ins = insertion_step(g.lx, 300.0, analytic_1d_source(c), c);
        CHECK_THAT(w_2d, WithinRel(ins.w, 0.025));  // 0.25 nm grid softening
    }

    SECTION("free energy rises slowly while the tip crosses the boundary layer") {
        const double first = curve.f[1] - curve.f[0];     // d in [0, 1] nm
        const double mid = curve.f[6] - curve.f[5];       // d in [5, 6] nm
        CHECK(first < 0.5 * mid);
    }
}

TEST_CASE("superposed expansion sweep") {
    const Geometry g = base_box();
    const std::vector<double> l_list = {5e-9, 7.5e-9, 10e-9, 12.5e-9, 15e-9, 20e-9};
    const SweepCurve curve = sweep_expansion(g, 300.0, l_list, false, kCoarse, c, {});
    REQUIRE(curve.all_ok());

    const double e_max = default_cutoff(
        box_ground_energy(g.lx, c) + box_ground_energy(g.ly, c), 300.0, c, 40.0);

    SECTION("mirror symmetry holds to roundoff") {
        CHECK_THAT(curve.f[0], WithinRel(curve.f[4], 1e-13));  // 5 vs 15 nm
        CHECK_THAT(curve.f[1], WithinRel(curve.f[3], 1e-13));  // 7.5 vs 12.5 nm
        CHECK_THAT(curve.s[0], WithinRel(curve.s[4], 1e-13));
        CHECK_THAT(curve.u[0], WithinRel(curve.u[4], 1e-13));
    }

    SECTION("center point equals the superposed-halves composition") {
        CHECK_THAT(curve.f[2], WithinRel(fd_state(40, e_max, 2).f, 1e-12));
    }

    SECTION("endpoint recovers the full box and the span is -W_ins, no kT ln 2") {
        CHECK_THAT(curve.f.back(), WithinRel(fd_state(80, e_max, 1).f, 1e-12));
        const double span = curve.f.back() - curve.f[2];
        const double w_ins_fd = fd_state(40, e_max, 2).f - fd_state(80, e_max, 1).f;
        CHECK_THAT(span, WithinAbs(-w_ins_fd, 1e-14 * oracle::frozen::kt_300k));
        const StepExchange ins = insertion_step(g.lx, 300.0, analytic_1d_source(c), c);
        CHECK_THAT(span, WithinRel(-ins.w, 0.025));
    }
}

TEST_CASE("localized expansion sweep") {
    const Geometry g = base_box();
    const std::vector<double> l_list = {10e-9, 12.5e-9, 15e-9, 17.5e-9, 20e-9};
    const SweepCurve curve = sweep_expansion(g, 300.0, l_list, true, kCoarse, c, {});
    REQUIRE(curve.all_ok());

    const double e_max = default_cutoff(
        box_ground_energy(g.lx, c) + box_ground_energy(g.ly, c), 300.0, c, 40.0);

    SECTION("starts from the single localized half") {
        CHECK_THAT(curve.f.front(), WithinRel(fd_state(40, e_max, 1).f, 1e-12));
    }

    SECTION("span equals the expansion work, kT ln 2 included") {
        const double span = curve.f.back() - curve.f.front();
        const StepExchange exp_ = expansion_step(g.lx, 300.0, analytic_1d_source(c), c);
        CHECK_THAT(span, WithinRel(exp_.w, 0.01));
        CHECK(span < 0.0);
    }

    SECTION("free energy decreases monotonically during expansion") {
        for (std::size_t i = 1; i < curve.f.size(); ++i) CHECK(curve.f[i] < curve.f[i - 1]);
    }
}

TEST_CASE("sweep failure and validation paths") {
    const Geometry g = base_box();

    SECTION("empty point list") {
        CHECK_THROWS_AS(sweep_insertion(g, 300.0, {}, kCoarse, c, {}), UsageError);
    }
    SECTION("points out of range") {
        CHECK_THROWS_AS(sweep_insertion(g, 300.0, {12e-9}, kCoarse, c, {}), UsageError);
    }
    SECTION("points colliding after snapping") {
        CHECK_THROWS_AS(sweep_insertion(g, 300.0, {5.0e-9, 5.1e-9}, kCoarse, c, {}),
                        UsageError);
    }
    SECTION("localized sweep cannot start at zero width") {
        const SweepCurve curve = sweep_expansion(g, 300.0, {0.0, 10e-9}, true, kCoarse, c, {});
        CHECK_FALSE(curve.status[0].ok);
        CHECK(curve.status[0].message.find("zero width") != std::string::npos);
        CHECK(curve.status[1].ok);
    }
    SECTION("sub-3-cell compartment fails that point only") {
        const SweepCurve curve =
            sweep_expansion(g, 300.0, {0.5e-9, 10e-9}, false, kCoarse, c, {});
        CHECK_FALSE(curve.status[0].ok);
        CHECK(curve.status[0].message.find("3 grid cells") != std::string::npos);
        CHECK(curve.status[1].ok);
    }
}

TEST_CASE("worker pools do not change the numbers") {
    const Geometry g = base_box();
    const auto d_list = linspace(0.0, g.ly, 6);
    SweepOptions serial;
    serial.workers = 1;
    SweepOptions pooled;
    pooled.workers = 3;
    const SweepCurve a = sweep_insertion(g, 300.0, d_list, kCoarse, c, serial);
    const SweepCurve b = sweep_insertion(g, 300.0, d_list, kCoarse, c, pooled);
    REQUIRE(a.f.size() == b.f.size());
    for (std::size_t i = 0; i < a.f.size(); ++i) {
        CHECK(a.f[i] == b.f[i]);
        CHECK(a.s[i] == b.s[i]);
        CHECK(a.u[i] == b.u[i]);
    }
}
