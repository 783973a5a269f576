#include "abtrace/errors.hpp"
#include "abtrace/trace.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace abtrace::trace {

SingularityPrediction predict_singularity(int sides, double radius, double flux) {
    if (sides < 2) throw std::invalid_argument("predict_singularity: need N >= 2");
    if (!(radius > 0.0)) throw std::invalid_argument("predict_singularity: radius must be positive");
    const double h = 2.0 * radius * std::sin(kPi / sides);
    SingularityPrediction p;
    p.sides = sides;
    p.radius = radius;
    p.length = sides * h;
    p.flux = flux;
    if (sides % 2 == 1) {
        p.side = Side::plus;
        p.prefactor = ((sides - 1) / 2) % 2 == 0 ? 1 : -1;
    } else {
        p.side = Side::minus;
        p.prefactor = (sides / 2 - 1) % 2 == 0 ? 1 : -1;
    }
    p.coefficient = p.prefactor * std::pow(2.0, -2.5) * std::pow(h, 1.5) / std::sqrt(double(sides)) * std::cos(flux);
    return p;
}

Complex frequency_integral(double s, const WindowSpec& window) {
    const double k = window.cutoff;
    // r = u^2 removes the square-root endpoint; the split sits at the
    // window's kink.
    auto part = [&](bool imag) {
        auto f = [&](double u) {
            const double r = u * u;
            const double w = window_profile(r / k) * 2.0 * r;
            return imag ? -w * std::sin(s * r) : w * std::cos(s * r);
        };
        double total = 0.0;
        const double cuts[3] = {0.0, std::sqrt(0.5 * k), std::sqrt(k)};
        for (int i = 0; i < 2; ++i) {
            double err = 0.0;
            double l1 = 0.0;
            const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                f, cuts[i], cuts[i + 1], 20, 1e-9, &err, &l1);
            if (!(err <= 1e-8 * std::max(1.0, l1))) {
                std::ostringstream os;
                os << "frequency integral at s=" << s << " error estimate " << err;
                throw QuadratureFailure(os.str());
            }
            total += v;
        }
        return total;
    };
    return {part(false), part(true)};
}

std::vector<double> model_shape(Side side, double length, const WindowSpec& window, std::span<const double> times) {
    // (t - L -/+ i0)^{-3/2} split by side; Gamma(3/2) = sqrt(pi)/2.
    const double norm = std::sqrt(2.0) * 0.5 * std::sqrt(kPi);
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        const Complex b = frequency_integral(t - length, window);
        out.push_back(side == Side::plus ? -(b.real() + b.imag()) / norm : (-b.real() + b.imag()) / norm);
    }
    return out;
}

std::vector<double> bandlimited_model(const SingularityPrediction& prediction, const WindowSpec& window,
                                      std::span<const double> times) {
    std::vector<double> out = model_shape(prediction.side, prediction.length, window, times);
    for (double& v : out) v *= prediction.coefficient;
    return out;
}

} // namespace abtrace::trace
