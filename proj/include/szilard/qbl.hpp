#pragma once

#include <cmath>
#include <numbers>

#include "szilard/constants.hpp"
#include "szilard/cycle.hpp"
#include "szilard/errors.hpp"

namespace szilard {

/// Quantum-boundary-layer thickness: one-fourth of the thermal de Broglie
/// wavelength.
inline double qbl_delta(double temperature, const PhysicalConstants& c = {}) {
    return thermal_wavelength(temperature, c) / 4.0;
}

/// Fractional safety margin on the L/2 > 2 delta validity condition. Below
/// the guard the boundary layers of wall and partition overlap and the
/// closed-form expressions stop meaning anything.
inline constexpr double kQblDefaultMargin = 0.10;

namespace detail {
inline double checked_delta(double length, double temperature, const PhysicalConstants& c,
                            double margin) {
    if (!(length > 0.0)) throw DomainError("box length must be positive");
    const double delta = qbl_delta(temperature, c);
    if (!(length / 2.0 > 2.0 * delta * (1.0 + margin)))
        throw DomainError("outside QBL validity: compartment length L/2 must exceed "
                          "2 delta by the safety margin (boundary-layer overlap regime)");
    return delta;
}
}  // namespace detail

/// Closed-form insertion work kT ln[(L-2d)/(L/2-2d)] - kT ln 2.
inline double insertion_work_analytic(double length, double temperature,
                                      const PhysicalConstants& c = {},
                                      double margin = kQblDefaultMargin) {
    const double delta = detail::checked_delta(length, temperature, c, margin);
    const double kT = thermal_energy(temperature, c);
    return kT * (std::log((length - 2.0 * delta) / (length / 2.0 - 2.0 * delta)) -
                 std::numbers::ln2);
}

/// Closed-form internal-energy change (kT/2)[(L/2)/(L/2-2d) - L/(L-2d)].
inline double delta_u_insertion_analytic(double length, double temperature,
                                         const PhysicalConstants& c = {},
                                         double margin = kQblDefaultMargin) {
    const double delta = detail::checked_delta(length, temperature, c, margin);
    const double kT = thermal_energy(temperature, c);
    const double half = length / 2.0;
    return 0.5 * kT * (half / (half - 2.0 * delta) - length / (length - 2.0 * delta));
}

/// Q = dU - W, exact first-law identity by construction.
inline double insertion_heat_analytic(double length, double temperature,
                                      const PhysicalConstants& c = {},
                                      double margin = kQblDefaultMargin) {
    return delta_u_insertion_analytic(length, temperature, c, margin) -
           insertion_work_analytic(length, temperature, c, margin);
}

/// Side-by-side comparison of the boundary-layer expressions against exact
/// spectral sums for one (L, T).
struct QblReport {
    double length = 0.0;       // m
    double temperature = 0.0;  // K
    double delta = 0.0;        // m
    double w_analytic = 0.0, du_analytic = 0.0, q_analytic = 0.0;  // J
    double w_exact = 0.0, du_exact = 0.0, q_exact = 0.0;           // J
    double w_rel_err = 0.0, du_rel_err = 0.0, q_rel_err = 0.0;
    bool near_validity_boundary = false;
    double max_rel_err() const {
        return std::max({w_rel_err, du_rel_err, q_rel_err});
    }
};

/// |analytic - exact| / max(|exact|, kT 1e-18); the floor keeps the ratio
/// finite where Q crosses zero.
inline double qbl_relative_error(double analytic, double exact, double kT) {
    return std::abs(analytic - exact) / std::max(std::abs(exact), kT * 1e-18);
}

inline QblReport validate_against_exact(double length, double temperature,
                                        const SpectrumSource& source,
                                        const PhysicalConstants& c = {},
                                        double margin = kQblDefaultMargin) {
    QblReport r;
    r.length = length;
    r.temperature = temperature;
    r.delta = qbl_delta(temperature, c);
    r.w_analytic = insertion_work_analytic(length, temperature, c, margin);
    r.du_analytic = delta_u_insertion_analytic(length, temperature, c, margin);
    r.q_analytic = r.du_analytic - r.w_analytic;
    const StepExchange exact = insertion_step(length, temperature, source, c);
    r.w_exact = exact.w;
    r.du_exact = exact.du;
    r.q_exact = exact.q;
    const double kT = thermal_energy(temperature, c);
    r.w_rel_err = qbl_relative_error(r.w_analytic, r.w_exact, kT);
    r.du_rel_err = qbl_relative_error(r.du_analytic, r.du_exact, kT);
    r.q_rel_err = qbl_relative_error(r.q_analytic, r.q_exact, kT);
    r.near_validity_boundary = length < 4.0 * r.delta * (1.0 + 5.0 * margin);
    return r;
}

}  // namespace szilard
