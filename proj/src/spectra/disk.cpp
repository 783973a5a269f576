#include "abtrace/errors.hpp"
#include "abtrace/parallel.hpp"
#include "abtrace/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abtrace::spectra {

void DiskFluxProblem::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    if (!(inner_radius >= 0.0 && inner_radius < radius))
        throw std::invalid_argument("need 0 <= inner_radius < radius");
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    if (potential != 0.0) throw std::invalid_argument("only V = 0 is supported");
}

std::vector<double> Spectrum::frequencies() const {
    std::vector<double> out;
    out.reserve(modes.size());
    for (const auto& m : modes) out.push_back(m.k);
    return out;
}

std::vector<double> Spectrum::eigenvalues() const {
    std::vector<double> out;
    out.reserve(modes.size());
    for (const auto& m : modes) out.push_back(m.lambda);
    return out;
}

namespace {

template <class Zeros>
Spectrum separated_spectrum(const DiskFluxProblem& p, double cutoff, int threads, ProblemKind kind,
                            Zeros&& zeros_of) {
    p.validate();
    if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
    const FluxOffset off = flux_offset(p.alpha);
    // j_{nu,1} > nu: channels with nu > K R carry nothing below the cutoff.
    const double nu_cap = cutoff * p.radius + 10.0;
    const long j_lo = static_cast<long>(std::ceil(-nu_cap - off.g));
    const long j_hi = static_cast<long>(std::floor(nu_cap - off.g));
    const std::size_t channels = static_cast<std::size_t>(j_hi - j_lo + 1);

    std::vector<std::vector<Mode>> per_channel(channels);
    parallel_for(channels, threads, [&](std::size_t i) {
        const long j = j_lo + static_cast<long>(i);
        const double nu = std::abs(static_cast<double>(j) + off.g);
        const std::vector<double> ks = zeros_of(nu);
        auto& out = per_channel[i];
        for (std::size_t n = 0; n < ks.size(); ++n) {
            Mode mode;
            mode.k = ks[n];
            mode.lambda = ks[n] * ks[n];
            mode.m = j - off.shift;
            mode.nu = nu;
            mode.n = static_cast<int>(n + 1);
            out.push_back(mode);
        }
    });

    Spectrum s;
    s.kind = kind;
    s.cutoff = cutoff;
    s.complete = true;
    for (auto& c : per_channel) s.modes.insert(s.modes.end(), c.begin(), c.end());
    std::sort(s.modes.begin(), s.modes.end(), [](const Mode& a, const Mode& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.m != b.m) return a.m < b.m;
        return a.n < b.n;
    });
    return s;
}

} // namespace

Spectrum disk_flux_spectrum(const DiskFluxProblem& problem, double cutoff, int threads) {
    if (problem.inner_radius != 0.0)
        throw std::invalid_argument("disk_flux_spectrum: inner_radius must be 0 (use the annulus solver)");
    const double r = problem.radius;
    return separated_spectrum(problem, cutoff, threads, ProblemKind::disk, [&](double nu) {
        std::vector<double> ks = bessel_j_zeros(nu, cutoff * r);
        for (double& k : ks) k /= r;
        return ks;
    });
}

Spectrum annulus_flux_spectrum(const DiskFluxProblem& problem, double cutoff, int threads) {
    if (!(problem.inner_radius > 0.0))
        throw std::invalid_argument("annulus_flux_spectrum: inner_radius must be positive");
    return separated_spectrum(problem, cutoff, threads, ProblemKind::annulus, [&](double nu) {
        return annulus_zeros(nu, problem.inner_radius, problem.radius, cutoff);
    });
}

} // namespace abtrace::spectra
