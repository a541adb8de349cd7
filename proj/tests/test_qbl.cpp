#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "szilard/qbl.hpp"

using namespace szilard;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const PhysicalConstants c;
const SpectrumSource src = analytic_1d_source(c);
}  // namespace

TEST_CASE("boundary-layer thickness") {
    CHECK_THAT(qbl_delta(300.0, c), WithinRel(oracle::frozen::delta_300k, 1e-12));
    CHECK(qbl_delta(300.0, c) == thermal_wavelength(300.0, c) / 4.0);
    CHECK_THAT(qbl_delta(4.0 * 300.0, c), WithinRel(qbl_delta(300.0, c) / 2.0, 1e-13));
    for (double t : {50.0, 300.0, 2000.0})
        CHECK_THAT(qbl_delta(t, c) * std::sqrt(t),
                   WithinRel(qbl_delta(300.0, c) * std::sqrt(300.0), 1e-12));
    CHECK_THROWS_AS(qbl_delta(-1.0, c), DomainError);
}

TEST_CASE("closed forms at 20 nm / 300 K") {
    const double kt = oracle::frozen::kt_300k;
    const double delta = oracle::frozen::delta_300k;
    const double w = insertion_work_analytic(20e-9, 300.0, c);
    const double du = delta_u_insertion_analytic(20e-9, 300.0, c);
    const double q = insertion_heat_analytic(20e-9, 300.0, c);

    // direct arithmetic replication of the formulas
    const double w_direct =
        kt * (std::log((20e-9 - 2 * delta) / (10e-9 - 2 * delta)) - std::numbers::ln2);
    const double du_direct =
        0.5 * kt * (10e-9 / (10e-9 - 2 * delta) - 20e-9 / (20e-9 - 2 * delta));
    CHECK_THAT(w, WithinRel(w_direct, 1e-12));
    CHECK_THAT(du, WithinRel(du_direct, 1e-12));
    CHECK(q == du - w);

    // the closed forms track the exact sums closely at this size
    CHECK_THAT(w / kt, WithinRel(oracle::frozen::w_ins_20nm_300k_kt, 1e-4));
    CHECK_THAT(du / kt, WithinRel(oracle::frozen::du_ins_20nm_300k_kt, 1e-4));
    CHECK(q < 0.0);
}

TEST_CASE("validity guard") {
    // 4 delta (1 + margin) ~ 4.73 nm at 300 K
    CHECK_THROWS_AS(insertion_work_analytic(4.0e-9, 300.0, c), DomainError);
    CHECK_THROWS_AS(delta_u_insertion_analytic(4.7e-9, 300.0, c), DomainError);
    CHECK_NOTHROW(insertion_work_analytic(4.8e-9, 300.0, c));
}

TEST_CASE("validation against exact sums at L = 10 nm, 300 K") {
    const QblReport r = validate_against_exact(10e-9, 300.0, src, c);

    // The insertion-work claim holds: relative error stays below 1e-6.
    CHECK(r.w_rel_err < 1e-6);
    CHECK_THAT(r.w_rel_err, WithinRel(oracle::frozen::qbl_relerr_w_10nm_300k, 1e-2));

    // dU and Q carry the theta-function corrections of the 5 nm compartment
    // amplified by the beta-derivative; their errors sit near 1.1e-5 and
    // 3.1e-5 (so the blanket <1e-6 claim fails for them; see the acceptance
    // suite output for the face-value check).
    CHECK_THAT(r.du_rel_err, WithinRel(oracle::frozen::qbl_relerr_du_10nm_300k, 1e-2));
    CHECK_THAT(r.q_rel_err, WithinRel(oracle::frozen::qbl_relerr_q_10nm_300k, 1e-2));

    CHECK_FALSE(r.near_validity_boundary);
    CHECK_THAT(r.q_analytic, WithinRel(r.du_analytic - r.w_analytic, 1e-12));
    CHECK(r.q_exact < 0.0);
    CHECK((r.q_analytic < 0.0) == (r.q_exact < 0.0));
}

TEST_CASE("analytic triple obeys the first law identically") {
    for (double lnm : {6.0, 10.0, 37.0, 150.0})
        for (double t : {200.0, 300.0, 900.0}) {
            if (lnm * 1e-9 <= 4.0 * qbl_delta(t, c) * 1.1) continue;
            const double w = insertion_work_analytic(lnm * 1e-9, t, c);
            const double du = delta_u_insertion_analytic(lnm * 1e-9, t, c);
            const double q = insertion_heat_analytic(lnm * 1e-9, t, c);
            CHECK(q == du - w);
        }
}

TEST_CASE("accuracy improves toward the classical limit") {
    const QblReport near = validate_against_exact(10e-9, 300.0, src, c);
    const QblReport mid = validate_against_exact(100e-9, 300.0, src, c);
    const QblReport far = validate_against_exact(200e-9, 300.0, src, c);
    CHECK(mid.w_rel_err <= near.w_rel_err);
    CHECK(mid.du_rel_err <= near.du_rel_err);
    CHECK(mid.q_rel_err <= near.q_rel_err);
    CHECK(far.max_rel_err() < 1e-6);
}

TEST_CASE("near-boundary flag raises before the guard trips") {
    const QblReport r = validate_against_exact(5.5e-9, 300.0, src, c);
    CHECK(r.near_validity_boundary);
    CHECK(r.max_rel_err() > 1e-4);  // error visibly grows near the overlap regime
}
