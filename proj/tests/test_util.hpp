#pragma once

#include "qgw/statevector.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testutil {

inline double max_amp_diff(const qgw::sim::Statevector &a, const qgw::sim::Statevector &b) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < a.dimension(); ++i) {
        worst = std::max(worst, std::abs(a.amplitude(i) - b.amplitude(i)));
    }
    return worst;
}

inline double max_amp_diff(const qgw::sim::Statevector &a,
                           const std::vector<std::complex<double>> &b) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < b.size(); ++i) {
        worst = std::max(worst, std::abs(a.amplitude(i) - b[i]));
    }
    return worst;
}

/// Upper regularized incomplete gamma Q(a, x): survival function of the
/// chi-square distribution via Q(k/2, x/2). Series + continued fraction.
inline double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) {
        return 1.0;
    }
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-14) {
                break;
            }
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1.0 - a;
    double c = 1e308;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) {
            d = 1e-300;
        }
        c = b + an / c;
        if (std::abs(c) < 1e-300) {
            c = 1e-300;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-14) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi_square_pvalue(double statistic, int dof) {
    return gammq(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

/// Random circuit over the full gate set, seeded.
inline void scramble(qgw::sim::Statevector &sv, std::uint64_t seed, int gates) {
    std::mt19937_64 rng(seed);
    const int n = sv.n_qubits();
    auto qubit = [&] { return static_cast<std::uint32_t>(rng() % n); };
    for (int g = 0; g < gates; ++g) {
        const double angle = 6.283185307179586 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const std::uint32_t t = qubit();
        switch (rng() % 6) {
        case 0:
            sv.apply_h(t);
            break;
        case 1:
            sv.apply_ry(angle, t);
            break;
        case 2:
            sv.apply_rz(angle, t);
            break;
        case 3:
            sv.apply_phase(angle, t);
            break;
        case 4: {
            const std::uint32_t c = qubit();
            if (c != t) {
                const std::uint32_t cs[] = {c};
                sv.apply_x(t, cs);
            } else {
                sv.apply_x(t);
            }
            break;
        }
        default: {
            const std::uint32_t b = qubit();
            if (b != t) {
                sv.apply_swap(t, b);
            }
            break;
        }
        }
    }
}

} // namespace testutil
