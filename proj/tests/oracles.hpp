#pragma once

// Test-only reference computations, deliberately independent of the library
// code paths they check.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// J_nu(x) from the ascending power series in long double. Fine for x below ~25.
inline double bessel_j_series(double nu, double x) {
    const long double h = 0.5L * x;
    long double term = std::pow(h, (long double)nu) / std::tgamma((long double)nu + 1.0L);
    long double sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= -h * h / ((long double)k * ((long double)k + nu));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) && k > 2 * x) break;
    }
    return static_cast<double>(sum);
}

/// Roots of f on [lo, hi] from a fine sign scan refined by bisection.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, double step) {
    std::vector<double> roots;
    double a = lo;
    double fa = f(a);
    for (double b = lo + step; b <= hi + 1e-15; b += step) {
        const double fb = f(b);
        if (fa * fb < 0.0) {
            double l = a, r = b, fl = fa;
            for (int i = 0; i < 200 && r - l > 1e-15 * r; ++i) {
                const double m = 0.5 * (l + r);
                const double fm = f(m);
                if (fl * fm <= 0.0) r = m;
                else { l = m; fl = fm; }
            }
            roots.push_back(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    return roots;
}

/// Band-limited (t - L)_+^{-3/2} at s = t - L written as a plain cosine
/// transform, -(2/sqrt(pi)) int chi(r/K) r^{1/2} cos(s r + pi/4) dr,
/// by composite Simpson in r = u^2.
inline double plus_model(double s, double cutoff, int panels = 200000) {
    const double pi = std::numbers::pi;
    auto chi = [pi](double x) {
        if (x <= 0.5) return 1.0;
        if (x >= 1.0) return 0.0;
        const double c = std::cos(pi * (x - 0.5));
        return c * c;
    };
    const double umax = std::sqrt(cutoff);
    const double h = umax / panels;
    double acc = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double u = i * h;
        const double r = u * u;
        const double g = chi(r / cutoff) * u * std::cos(s * r + pi / 4) * 2.0 * u;
        acc += g * ((i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return -(2.0 / std::sqrt(pi)) * acc * h / 3.0;
}

} // namespace oracle
