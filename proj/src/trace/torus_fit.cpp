#include "abtrace/errors.hpp"
#include "abtrace/trace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abtrace::trace {

namespace {

// Lengths |d'| of nonzero lattice vectors up to `bound`, plus t = 0.
std::vector<double> lattice_lengths(const Lattice& lattice, double bound) {
    const auto [f1, f2] = lattice.dual_basis();
    const long n1 = static_cast<long>(std::ceil(bound * f1.norm()));
    const long n2 = static_cast<long>(std::ceil(bound * f2.norm()));
    std::vector<double> out{0.0};
    for (long m1 = -n1; m1 <= n1; ++m1)
        for (long m2 = -n2; m2 <= n2; ++m2) {
            if (m1 == 0 && m2 == 0) continue;
            const double l = lattice.point(m1, m2).norm();
            if (l <= bound) out.push_back(l);
        }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<TorusPeak> torus_peak_weights(const TraceSamples& trace, const Lattice& lattice,
                                          std::span<const std::array<long, 2>> vectors,
                                          const TorusFitOptions& options) {
    lattice.validate();
    double max_len = 0.0;
    for (const auto& v : vectors) {
        if (v[0] == 0 && v[1] == 0) throw std::invalid_argument("torus_peak_weights: zero lattice vector");
        max_len = std::max(max_len, lattice.point(v[0], v[1]).norm());
    }
    const auto generic = spectra::lattice_genericity(lattice, max_len + 1.0);
    if (!generic.pass) {
        const auto& w = *generic.witness;
        std::ostringstream os;
        os << "(" << w[0][0] << ", " << w[0][1] << ") and (" << w[1][0] << ", " << w[1][1] << ") have equal length";
        throw GenericityFailure(os.str());
    }
    const std::vector<double> lengths = lattice_lengths(lattice, max_len + 1.0);

    std::vector<TorusPeak> out;
    for (const auto& v : vectors) {
        TorusPeak peak;
        peak.m1 = v[0];
        peak.m2 = v[1];
        peak.length = lattice.point(v[0], v[1]).norm();
        // +-d share a length; verify_isolation skips entries equal to L.
        const IsolationReport iso = verify_isolation(lengths, peak.length, 0.0);
        peak.half_width = options.half_width.value_or(std::min(0.3, 0.5 * iso.distance));

        SingularityPrediction unit;
        unit.length = peak.length;
        unit.coefficient = 1.0;
        unit.side = Side::plus;
        FitOptions fo;
        fo.half_width = peak.half_width;
        fo.background_degree = options.background_degree;
        const FitResult fit = fit_amplitude(trace, unit, iso, fo);
        peak.weight = fit.c_hat;
        peak.residual = fit.residual;
        out.push_back(peak);
    }
    return out;
}

} // namespace abtrace::trace
