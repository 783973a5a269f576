#include "abtrace/billiards.hpp"
#include "abtrace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace abtrace::billiards {

namespace {

constexpr std::size_t kMaxReflections = 10'000'000;

struct Hit {
    double distance;
    Vec2 point;
    Boundary boundary;
};

// Next intersection of p + s d (s > 0) with the domain boundary.
std::optional<Hit> next_hit(const Vec2& p, const Vec2& d, const Geometry& g) {
    const double b = p.dot(d);
    const double R = g.outer_radius;

    // Outer circle: s^2 + 2 b s + (|p|^2 - R^2) = 0, positive root.
    const double c_out = std::min(p.squaredNorm() - R * R, 0.0);
    const double sq_out = std::sqrt(b * b - c_out);
    double s_out = (b >= 0.0) ? -c_out / (b + sq_out) : sq_out - b;
    std::optional<Hit> best;
    if (s_out > 0.0) {
        Vec2 q = p + s_out * d;
        q *= R / q.norm();
        best = Hit{s_out, q, Boundary::outer};
    }

    if (g.has_obstacle() && b < 0.0) {
        const double r0 = g.inner_radius;
        const double c_in = p.squaredNorm() - r0 * r0;
        const double disc = b * b - c_in;
        if (disc > 0.0) {
            const double s_in = c_in / (std::sqrt(disc) - b);
            if (s_in > 1e-12 && (!best || s_in < best->distance)) {
                Vec2 q = p + s_in * d;
                q *= r0 / q.norm();
                best = Hit{s_in, q, Boundary::inner};
            }
        }
    }
    return best;
}

template <typename OnReflect>
std::pair<Vec2, Vec2> propagate(const Vec2& z, const Vec2& eta, double t, const Geometry& g,
                                OnReflect&& on_reflect) {
    Vec2 p = z;
    Vec2 d = eta;
    double elapsed = 0.0;
    for (std::size_t n = 0;; ++n) {
        if (n > kMaxReflections) throw std::runtime_error("trace_ray: reflection limit exceeded");
        auto hit = next_hit(p, d, g);
        if (!hit) throw std::runtime_error("trace_ray: ray left the domain");
        if (elapsed + hit->distance > t) break;
        elapsed += hit->distance;
        const Vec2 incoming = d;
        d = reflect_direction(UnitDirection(d), hit->point).vec();
        p = hit->point;
        on_reflect(ReflectionEvent{elapsed, p, incoming, d, hit->boundary});
    }
    return {p + (t - elapsed) * d, d};
}

} // namespace

UnitDirection::UnitDirection(const Vec2& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("UnitDirection: zero or non-finite vector");
    v_ = v / n;
}

UnitDirection UnitDirection::from_angle(double theta) {
    return UnitDirection(Vec2(std::cos(theta), std::sin(theta)));
}

double UnitDirection::angle() const { return std::atan2(v_.y(), v_.x()); }

void Geometry::validate() const {
    if (!(inner_radius >= 0.0 && inner_radius < outer_radius)) {
        std::ostringstream os;
        os << "Geometry: need 0 <= r0 < R, got r0=" << inner_radius << " R=" << outer_radius;
        throw std::invalid_argument(os.str());
    }
}

bool Geometry::contains(const Vec2& p) const {
    const double r = p.norm();
    return r < outer_radius && (!has_obstacle() || r > inner_radius);
}

UnitDirection reflect_direction(const UnitDirection& eta, const Vec2& p) {
    const Vec2 nu = p.normalized();
    const double dn = nu.dot(eta.vec());
    if (std::abs(dn) < kTangencyTolerance) {
        std::ostringstream os;
        os << "|eta.nu| = " << std::abs(dn) << " at (" << p.x() << ", " << p.y() << ")";
        throw TangentialHit(os.str());
    }
    return UnitDirection(eta.vec() - 2.0 * dn * nu);
}

ReflectedRayPath::ReflectedRayPath(Vec2 start, UnitDirection direction, double duration,
                                   Geometry geometry, std::vector<ReflectionEvent> events,
                                   bool inner_hit)
    : start_(std::move(start)), direction_(std::move(direction)), duration_(duration),
      geometry_(geometry), events_(std::move(events)), inner_hit_(inner_hit) {}

std::size_t ReflectedRayPath::reflections_before(double t) const {
    auto it = std::upper_bound(events_.begin(), events_.end(), t,
                               [](double v, const ReflectionEvent& e) { return v < e.time; });
    return static_cast<std::size_t>(it - events_.begin());
}

Vec2 ReflectedRayPath::position(double t) const {
    const std::size_t k = reflections_before(t);
    if (k == 0) return start_ + t * direction_.vec();
    const auto& e = events_[k - 1];
    return e.point + (t - e.time) * e.outgoing;
}

Vec2 ReflectedRayPath::direction(double t) const {
    const std::size_t k = reflections_before(t);
    return k == 0 ? direction_.vec() : events_[k - 1].outgoing;
}

std::vector<Vec2> ReflectedRayPath::polyline(double t) const {
    std::vector<Vec2> pts{start_};
    const std::size_t k = reflections_before(t);
    for (std::size_t i = 0; i < k; ++i) pts.push_back(events_[i].point);
    pts.push_back(position(t));
    return pts;
}

double ReflectedRayPath::distance_to_reflection(double t) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : events_) best = std::min(best, std::abs(t - e.time));
    return best;
}

ReflectedRayPath trace_ray(const Vec2& z, const UnitDirection& eta, double t_max,
                           const Geometry& g) {
    g.validate();
    if (!(t_max > 0.0)) throw std::invalid_argument("trace_ray: t_max must be positive");
    if (!g.contains(z)) throw std::invalid_argument("trace_ray: start point outside the domain");
    std::vector<ReflectionEvent> events;
    bool inner = false;
    propagate(z, eta.vec(), t_max, g, [&](const ReflectionEvent& e) {
        inner = inner || e.boundary == Boundary::inner;
        events.push_back(e);
    });
    return ReflectedRayPath(z, eta, t_max, g, std::move(events), inner);
}

PhasePoint flow(const Vec2& z, const Vec2& eta, double t, const Geometry& g) {
    const double scale = eta.norm();
    int count = 0;
    auto [x, d] = propagate(z, UnitDirection(eta).vec(), t, g, [&](const ReflectionEvent&) { ++count; });
    return PhasePoint{x, scale * d, count};
}

} // namespace abtrace::billiards
