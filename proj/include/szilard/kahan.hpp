#pragma once

namespace szilard {

/// Kahan-compensated accumulator. Keeps the running error of each addition
/// and feeds it back into the next one, so long Boltzmann-weighted sums hold
/// ~1e-16 relative error independent of term count.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    KahanSum& operator+=(double value) {
        add(value);
        return *this;
    }

    operator double() const { return sum; }
};

}  // namespace szilard
