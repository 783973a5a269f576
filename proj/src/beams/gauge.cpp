#include "abtrace/gauge.hpp"
#include "abtrace/billiards.hpp"
#include "abtrace/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <vector>

namespace abtrace {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

Vec2 fourier_sum(const FourierPeriodic& f, const Vec2& x) {
    Vec2 out = f.a0;
    for (const auto& mode : f.modes) {
        const Vec2 delta = f.lattice.dual_point(mode.d1, mode.d2);
        const Complex e = std::exp(Complex(0.0, 2.0 * kPi * delta.dot(x)));
        out += (mode.coefficient * e).real();
    }
    return out;
}

} // namespace

Vec2 potential(const GaugeField& field, const Vec2& x) {
    return std::visit(overloaded{
                          [&](const IdealFlux& f) -> Vec2 {
                              const Vec2 r = x - f.center;
                              const double r2 = r.squaredNorm();
                              if (!(r2 > 0.0)) throw DomainError("potential evaluated on the flux line");
                              return f.alpha / (2.0 * kPi) * Vec2(-r.y(), r.x()) / r2;
                          },
                          [&](const ConstantOnTorus& f) -> Vec2 { return f.a0; },
                          [&](const FourierPeriodic& f) -> Vec2 { return fourier_sum(f, x); },
                      },
                      field);
}

double curl(const GaugeField& field, const Vec2& x, double h) {
    const Vec2 dx(h, 0.0);
    const Vec2 dy(0.0, h);
    const double d2a1 = (potential(field, x + dy).x() - potential(field, x - dy).x()) / (2.0 * h);
    const double d1a2 = (potential(field, x + dx).y() - potential(field, x - dx).y()) / (2.0 * h);
    return d2a1 - d1a2;
}

double segment_integral(const GaugeField& field, const Vec2& p, const Vec2& q) {
    return std::visit(
        overloaded{
            [&](const IdealFlux& f) -> double {
                const Vec2 u = p - f.center;
                const Vec2 v = q - f.center;
                const double cr = cross(u, v);
                const double dt = u.dot(v);
                if (cr == 0.0 && dt <= 0.0) throw DomainError("segment passes through the flux line");
                return f.alpha / (2.0 * kPi) * std::atan2(cr, dt);
            },
            [&](const ConstantOnTorus& f) -> double { return f.a0.dot(q - p); },
            [&](const FourierPeriodic& f) -> double {
                const Vec2 step = q - p;
                auto integrand = [&](double s) { return fourier_sum(f, p + s * step).dot(step); };
                double err = 0.0;
                const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                    integrand, 0.0, 1.0, 15, 1e-10, &err);
                if (err > 1e-8 * std::max(1.0, std::abs(val)))
                    throw QuadratureFailure("line integral did not converge");
                return val;
            },
        },
        field);
}

double polyline_integral(const GaugeField& field, std::span<const Vec2> points) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) total += segment_integral(field, points[i], points[i + 1]);
    return total;
}

double path_integral(const GaugeField& field, const billiards::ReflectedRayPath& path, double t0,
                     double t1) {
    if (t1 < t0) throw std::invalid_argument("path_integral: t1 < t0");
    std::vector<Vec2> pts{path.position(t0)};
    for (const auto& e : path.reflections())
        if (e.time > t0 && e.time < t1) pts.push_back(e.point);
    pts.push_back(path.position(t1));
    return polyline_integral(field, pts);
}

double holonomy(const GaugeField& field, std::span<const Vec2> loop, double tol) {
    if (loop.size() < 2) throw NonClosedPath("loop needs at least two points");
    const Vec2 gap = loop.back() - loop.front();
    const bool closed = std::visit(
        overloaded{
            [&](const IdealFlux&) { return gap.norm() <= tol; },
            [&](const ConstantOnTorus& f) { return f.lattice.coordinates(gap, tol).has_value(); },
            [&](const FourierPeriodic& f) { return f.lattice.coordinates(gap, tol).has_value(); },
        },
        field);
    if (!closed) {
        std::ostringstream os;
        os << "endpoints differ by " << gap.norm();
        throw NonClosedPath(os.str());
    }
    return polyline_integral(field, loop);
}

} // namespace abtrace
