#include "abtrace/errors.hpp"
#include "abtrace/spectra.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace abtrace::spectra {

namespace {

using Policy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>>;

void check_range(double nu, double x, const BesselLimits& limits) {
    if (!(nu >= 0.0 && nu <= limits.nu_max && x >= 0.0 && x <= limits.x_max)) {
        std::ostringstream os;
        os << "Bessel arguments nu=" << nu << " x=" << x << " outside [0," << limits.nu_max << "]x[0,"
           << limits.x_max << "]";
        throw DomainError(os.str());
    }
}

double jn(double nu, double x) { return boost::math::cyl_bessel_j(nu, x, Policy()); }

double yn(double nu, double x) {
    const double y = boost::math::cyl_neumann(nu, x, Policy());
    return std::isfinite(y) ? y : -std::numeric_limits<double>::infinity();
}

template <class F>
double refine(F&& f, double lo, double hi, double flo, double fhi) {
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                          boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (a + b);
}

// Sign scan of f on [lo, hi] with the given step, each bracket refined.
template <class F>
std::vector<double> scan_zeros(F&& f, double lo, double hi, double step) {
    std::vector<double> zeros;
    double x_prev = lo;
    double f_prev = f(lo);
    while (x_prev < hi) {
        const double x = std::min(x_prev + step, hi);
        const double fx = f(x);
        if (fx == 0.0)
            zeros.push_back(x);
        else if (f_prev != 0.0 && (f_prev < 0.0) != (fx < 0.0))
            zeros.push_back(refine(f, x_prev, x, f_prev, fx));
        x_prev = x;
        f_prev = fx;
    }
    return zeros;
}

} // namespace

double bessel_j(double nu, double x, const BesselLimits& limits) {
    check_range(nu, x, limits);
    return jn(nu, x);
}

double bessel_y(double nu, double x, const BesselLimits& limits) {
    check_range(nu, x, limits);
    if (!(x > 0.0)) throw DomainError("Y_nu needs x > 0");
    return yn(nu, x);
}

std::vector<double> bessel_j_zeros(double nu, double k_max, const BesselLimits& limits) {
    check_range(nu, k_max, limits);
    // j_{nu,1} > nu and consecutive zeros are more than 2 apart, so a unit
    // step sees every zero as a single sign change.
    if (k_max <= nu) return {};
    auto f = [nu](double x) { return jn(nu, x); };
    std::vector<double> zeros = scan_zeros(f, nu, k_max, 1.0);

    // J_{nu+1} has exactly one zero between consecutive zeros of J_nu and is
    // positive at j_{nu,1}: its signs at the found zeros must alternate.
    double expected = 1.0;
    for (double z : zeros) {
        const double s = jn(nu + 1.0, z);
        if (!(s * expected > 0.0)) {
            std::ostringstream os;
            os << "interlacing check failed for nu=" << nu << " near x=" << z;
            throw ConvergenceFailure(os.str());
        }
        expected = -expected;
    }
    return zeros;
}

std::vector<double> annulus_zeros(double nu, double r0, double radius, double k_max,
                                  const BesselLimits& limits) {
    if (!(r0 > 0.0 && r0 < radius)) throw std::invalid_argument("annulus_zeros: need 0 < r0 < R");
    check_range(nu, k_max * radius, limits);
    // lambda >= nu^2 / R^2, so nothing lies below nu / R.
    const double lo = std::max(nu / radius, 1e-6 / radius);
    if (k_max <= lo) return {};
    // The cross product divided by |(J, Y)(k r0)|, which keeps it finite when
    // Y_nu(k r0) overflows.
    auto f = [=](double k) {
        const double jr = jn(nu, k * r0);
        const double yr = yn(nu, k * r0);
        double c = 0.0;
        double s = -1.0;
        if (std::isfinite(yr)) {
            const double norm = std::hypot(jr, yr);
            c = jr / norm;
            s = yr / norm;
        }
        return c * yn(nu, k * radius) - s * jn(nu, k * radius);
    };
    return scan_zeros(f, lo, k_max, 0.25 * kPi / (radius - r0));
}

FluxOffset flux_offset(double alpha) {
    // Snapping alpha / 2pi to a 2^-36 grid absorbs the rounding of alpha + 2pi,
    // so alpha, -alpha and alpha + 2pi give bit-identical orders.
    constexpr double grid = 68719476736.0; // 2^36
    const double f = alpha / (2.0 * kPi);
    if (!(std::abs(f) < 1e5)) throw DomainError("flux too large");
    const double q = std::round(f * grid) / grid;
    const double r = std::round(q);
    return {static_cast<long>(r), q - r};
}

} // namespace abtrace::spectra
