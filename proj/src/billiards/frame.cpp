#include "abtrace/billiards.hpp"
#include "abtrace/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace abtrace::billiards {

Mat4 JacobiFrame::matrix() const {
    Mat4 f;
    f << a, b, c, d;
    return f;
}

double JacobiFrame::symplectic_defect() const {
    const double d1 = (a.transpose() * d - c.transpose() * b - Mat2::Identity()).norm();
    const double d2 = (a.transpose() * c - c.transpose() * a).norm();
    const double d3 = (b.transpose() * d - d.transpose() * b).norm();
    return std::max({d1, d2, d3});
}

namespace {

using State = Eigen::Vector4d; // (x, xi)

State evaluate(const Vec2& z, const Vec2& eta, double t, const Geometry& g, int expected) {
    const PhasePoint p = flow(z, eta, t, g);
    if (p.reflections != expected) {
        std::ostringstream os;
        os << "perturbed ray crosses a reflection near t=" << t;
        throw ReflectionAdjacent(os.str());
    }
    State s;
    s << p.x, p.xi;
    return s;
}

} // namespace

JacobiFrame frame_at(const ReflectedRayPath& path, double t, const FrameOptions& options) {
    if (t < 0.0 || t > path.duration() * (1.0 + 1e-12))
        throw std::invalid_argument("frame_at: t outside the path's time domain");
    const double gap = path.distance_to_reflection(t);
    if (gap < options.reflection_guard) {
        std::ostringstream os;
        os << "t=" << t << " is " << gap << " from a reflection";
        throw ReflectionAdjacent(os.str());
    }

    const auto& g = path.geometry();
    const Vec2 z = path.start();
    const Vec2 eta = path.initial_direction().vec();
    const int k = static_cast<int>(path.reflections_before(t));

    // Columns: d/dz1, d/dz2, d/deta1, d/deta2 of (x, xi).
    Eigen::Matrix4d jac;
    for (int col = 0; col < 4; ++col) {
        auto central = [&](double h) {
            Vec2 dz = Vec2::Zero();
            Vec2 de = Vec2::Zero();
            (col < 2 ? dz : de)(col % 2) = h;
            return State((evaluate(z + dz, eta + de, t, g, k) - evaluate(z - dz, eta - de, t, g, k)) / (2.0 * h));
        };
        const State coarse = central(options.step);
        const State fine = central(0.5 * options.step);
        jac.col(col) = (4.0 * fine - coarse) / 3.0;
    }

    JacobiFrame f;
    f.time = t;
    f.a = jac.block<2, 2>(0, 0);
    f.b = jac.block<2, 2>(0, 2);
    f.c = jac.block<2, 2>(2, 0);
    f.d = jac.block<2, 2>(2, 2);
    return f;
}

JacobiFrame frame_limit(const ReflectedRayPath& path, std::size_t index, bool after,
                        const FrameOptions& options) {
    const auto events = path.reflections();
    if (index >= events.size()) throw std::invalid_argument("frame_limit: no such reflection");
    const double tk = events[index].time;
    const double other = after ? (index + 1 < events.size() ? events[index + 1].time : path.duration())
                               : (index > 0 ? events[index - 1].time : 0.0);
    const double len = std::abs(other - tk);
    if (len < 8.0 * options.reflection_guard)
        throw ReflectionAdjacent("frame_limit: adjacent segment too short");

    const double dir = after ? 1.0 : -1.0;
    const double s1 = tk + dir * 0.25 * len;
    const double s2 = tk + dir * 0.5 * len;
    const JacobiFrame f1 = frame_at(path, s1, options);
    const JacobiFrame f2 = frame_at(path, s2, options);
    const double w = (tk - s1) / (s2 - s1);

    JacobiFrame f;
    f.time = tk;
    f.a = f1.a + w * (f2.a - f1.a);
    f.b = f1.b + w * (f2.b - f1.b);
    f.c = 0.5 * (f1.c + f2.c);
    f.d = 0.5 * (f1.d + f2.d);
    return f;
}

std::vector<double> focal_times(const ReflectedRayPath& path, const FrameSampler& sampler,
                                int samples_per_segment) {
    const FrameSampler sample = sampler ? sampler : [&path](double t) { return frame_at(path, t); };
    auto det_a = [&](double t) { return sample(t).a.determinant(); };

    std::vector<double> bounds{0.0};
    for (const auto& e : path.reflections()) bounds.push_back(e.time);
    bounds.push_back(path.duration());

    constexpr double margin = 1e-3;
    std::vector<double> roots;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        const double lo = bounds[s] + (s == 0 ? 0.0 : margin);
        const double hi = bounds[s + 1] - (s + 2 == bounds.size() ? 0.0 : margin);
        if (!(hi > lo)) continue;

        double t_prev = lo;
        double f_prev = det_a(lo);
        for (int i = 1; i <= samples_per_segment; ++i) {
            const double t = lo + (hi - lo) * i / samples_per_segment;
            const double f = det_a(t);
            if (f_prev == 0.0) {
                roots.push_back(t_prev);
            } else if (f_prev * f < 0.0) {
                std::uintmax_t iters = 200;
                auto tol = [](double x, double y) { return std::abs(x - y) < 1e-11; };
                auto [r0, r1] = boost::math::tools::toms748_solve(det_a, t_prev, t, f_prev, f, tol, iters);
                roots.push_back(0.5 * (r0 + r1));
            }
            t_prev = t;
            f_prev = f;
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                roots.end());
    return roots;
}

} // namespace abtrace::billiards
