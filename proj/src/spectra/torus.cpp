#include "abtrace/errors.hpp"
#include "abtrace/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace abtrace::spectra {

Spectrum torus_spectrum(const TorusProblem& problem, double cutoff) {
    problem.lattice.validate();
    if (!(cutoff > 0.0)) throw std::invalid_argument("torus_spectrum: cutoff must be positive");
    const auto [f1, f2] = problem.lattice.dual_basis();
    // |delta| <= (K + |A0|) / 2pi and delta . e_i = d_i.
    const double bound = (cutoff + problem.a0.norm()) / (2.0 * kPi);
    const long n1 = static_cast<long>(std::ceil(bound * problem.lattice.e1.norm()));
    const long n2 = static_cast<long>(std::ceil(bound * problem.lattice.e2.norm()));

    Spectrum s;
    s.kind = ProblemKind::torus;
    s.cutoff = cutoff;
    s.complete = true;
    const double k2 = cutoff * cutoff;
    for (long d1 = -n1; d1 <= n1; ++d1) {
        for (long d2 = -n2; d2 <= n2; ++d2) {
            const Vec2 v = 2.0 * kPi * (double(d1) * f1 + double(d2) * f2) - problem.a0;
            const double lambda = v.squaredNorm();
            if (lambda > k2) continue;
            Mode m;
            m.lambda = lambda;
            m.k = std::sqrt(lambda);
            m.d1 = d1;
            m.d2 = d2;
            s.modes.push_back(m);
        }
    }
    std::sort(s.modes.begin(), s.modes.end(), [](const Mode& a, const Mode& b) {
        return std::tie(a.lambda, a.d1, a.d2) < std::tie(b.lambda, b.d1, b.d2);
    });
    return s;
}

GenericityReport lattice_genericity(const Lattice& lattice, double bound) {
    lattice.validate();
    if (!(bound > 0.0)) throw std::invalid_argument("lattice_genericity: bound must be positive");
    const auto [f1, f2] = lattice.dual_basis();
    const long n1 = static_cast<long>(std::ceil(bound * f1.norm()));
    const long n2 = static_cast<long>(std::ceil(bound * f2.norm()));

    // One representative of each pair +-d, so any equal-length pair is a violation.
    struct Entry {
        double norm;
        long m1;
        long m2;
    };
    std::vector<Entry> half;
    for (long m1 = 0; m1 <= n1; ++m1) {
        for (long m2 = -n2; m2 <= n2; ++m2) {
            if (m1 == 0 && m2 <= 0) continue;
            const double norm = lattice.point(m1, m2).norm();
            if (norm <= bound) half.push_back({norm, m1, m2});
        }
    }
    std::sort(half.begin(), half.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.norm, b.m1, b.m2) < std::tie(b.norm, a.m1, a.m2);
    });

    GenericityReport report;
    report.vectors_checked = half.size();
    for (std::size_t i = 0; i + 1 < half.size(); ++i) {
        const Entry& a = half[i];
        const Entry& b = half[i + 1];
        if (b.norm - a.norm <= 1e-9 * b.norm) {
            report.pass = false;
            report.witness = {{{a.m1, a.m2}, {b.m1, b.m2}}};
            break;
        }
    }
    return report;
}

double GaugeReduction::phase(const Lattice& lattice, const Vec2& x) const {
    double out = 0.0;
    for (const auto& p : phi) {
        const Vec2 delta = lattice.dual_point(p.d1, p.d2);
        out += (p.coefficient * std::exp(Complex(0.0, 2.0 * kPi * delta.dot(x)))).real();
    }
    return out;
}

Vec2 GaugeReduction::phase_gradient(const Lattice& lattice, const Vec2& x) const {
    Vec2 out = Vec2::Zero();
    for (const auto& p : phi) {
        const Vec2 delta = lattice.dual_point(p.d1, p.d2);
        const Complex w = 2.0 * kPi * kI * p.coefficient * std::exp(Complex(0.0, 2.0 * kPi * delta.dot(x)));
        out += delta * w.real();
    }
    return out;
}

GaugeReduction reduce_to_constant_gauge(const FourierPeriodic& field) {
    field.lattice.validate();
    GaugeReduction out;
    out.a0 = field.a0;
    for (const auto& mode : field.modes) {
        const Eigen::Vector2cd& a = mode.coefficient;
        if (mode.d1 == 0 && mode.d2 == 0) {
            out.a0 += a.real();
            continue;
        }
        const Vec2 delta = field.lattice.dual_point(mode.d1, mode.d2);
        // Zero field for this mode means A_delta is parallel to delta.
        const Complex cr = delta.x() * a.y() - delta.y() * a.x();
        if (std::abs(cr) > 1e-10 * delta.norm() * std::max(1.0, a.norm())) {
            std::ostringstream os;
            os << "mode (" << mode.d1 << ", " << mode.d2 << ") has |delta x A_delta| = " << std::abs(cr);
            throw NotCurlFree(os.str());
        }
        const Complex dot = delta.x() * a.x() + delta.y() * a.y();
        out.phi.push_back({mode.d1, mode.d2, dot / (2.0 * kPi * kI * delta.squaredNorm())});
    }
    return out;
}

} // namespace abtrace::spectra
