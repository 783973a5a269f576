#include "abtrace/billiards.hpp"
#include "abtrace/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace abtrace;
using namespace abtrace::billiards;

TEST_CASE("reflection reverses the normal component and keeps unit speed") {
    const Vec2 p(std::cos(0.4), std::sin(0.4));
    const auto eta = UnitDirection::from_angle(0.1);
    const auto out = reflect_direction(eta, p);
    CHECK(out.vec().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out.vec().dot(p) == doctest::Approx(-eta.vec().dot(p)).epsilon(1e-14));
    CHECK(cross(p, out.vec()) == doctest::Approx(cross(p, eta.vec())).epsilon(1e-14));
}

TEST_CASE("tangential incidence is rejected") {
    const Vec2 p(1.0, 0.0);
    CHECK_THROWS_AS(reflect_direction(UnitDirection(Vec2(0.0, 1.0)), p), TangentialHit);
    CHECK_THROWS_AS(UnitDirection(Vec2::Zero()), std::invalid_argument);
}

TEST_CASE("inscribed polygons close after N reflections") {
    const Geometry disk{1.3, 0.0};
    for (int n = 2; n <= 9; ++n) {
        const auto orbit = ngon_orbit(n, 1.3, 0.7, Orientation::counterclockwise, 0.1 * std::sin(kPi / n));
        const double len = orbit.spec.length();
        CHECK(len == doctest::Approx(2.0 * n * 1.3 * std::sin(kPi / n)).epsilon(1e-14));
        const auto path = trace_ray(orbit.start, orbit.direction, len + 1e-9, disk);
        CHECK(path.reflections().size() == static_cast<std::size_t>(n));
        CHECK((path.position(len) - orbit.start).norm() < 1e-11);
        CHECK((path.direction(len) - orbit.direction.vec()).norm() < 1e-11);
        CHECK_FALSE(path.inner_hit());
    }
}

TEST_CASE("clockwise orbit mirrors the counterclockwise one") {
    const auto ccw = ngon_orbit(3, 1.0, 0.0, Orientation::counterclockwise);
    const auto cw = ngon_orbit(3, 1.0, 0.0, Orientation::clockwise);
    CHECK(ccw.start.y() == doctest::Approx(-cw.start.y()));
    CHECK(ccw.start.y() == doctest::Approx(-0.5));
    CHECK_THROWS_AS(ngon_orbit(3, 1.0, 0.0, Orientation::counterclockwise, 0.9), std::invalid_argument);
}

TEST_CASE("flow is homogeneous of degree 0 in x and 1 in xi") {
    const Geometry disk{1.0, 0.0};
    const Vec2 z(0.2, -0.1);
    const Vec2 eta(0.6, 0.3);
    const auto p1 = flow(z, eta, 4.7, disk);
    const auto p2 = flow(z, 2.5 * eta, 4.7, disk);
    CHECK((p1.x - p2.x).norm() < 1e-13);
    CHECK((2.5 * p1.xi - p2.xi).norm() < 1e-12);
    CHECK(p1.reflections == p2.reflections);
}

TEST_CASE("rays stay inside and avoid the obstacle") {
    const Geometry ann{1.0, 0.4};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double r = 0.45 + 0.5 * u(rng);
        const double a = 2 * kPi * u(rng);
        const auto path = trace_ray(Vec2(r * std::cos(a), r * std::sin(a)),
                                    UnitDirection::from_angle(2 * kPi * u(rng)), 12.0, ann);
        for (double t = 0.0; t < 12.0; t += 0.01) {
            const double rr = path.position(t).norm();
            CHECK(rr <= 1.0 + 1e-12);
            CHECK(rr >= 0.4 - 1e-12);
        }
    }
}

TEST_CASE("frame is symplectic and matches the closed form at closure") {
    const Geometry disk{1.0, 0.0};
    for (double v : {0.0, 0.15}) {
        const auto orbit = ngon_orbit(3, 1.0, 0.0, Orientation::counterclockwise, v);
        const double len = orbit.spec.length();
        const auto path = trace_ray(orbit.start, orbit.direction, len, disk);
        const auto f = frame_at(path, len);
        CHECK(f.symplectic_defect() < 1e-8);
        const double c0 = orbit.spec.closure_curvature();
        CHECK(c0 == doctest::Approx(4.0 * std::sqrt(3.0)));
        const Mat2 pp = projector(orbit.direction.perp());
        CHECK((f.c - c0 * pp).norm() < 1e-6);
        CHECK((f.a - Mat2::Identity() - v * c0 * pp).norm() < 1e-6);
        CHECK((f.b + c0 * v * v * pp).norm() < 1e-6);
    }
}

TEST_CASE("frame is free propagation before the first reflection") {
    const Geometry disk{1.0, 0.0};
    const auto path = trace_ray(Vec2(0.1, 0.2), UnitDirection::from_angle(1.0), 3.0, disk);
    const double t = 0.5 * path.reflections()[0].time;
    const auto f = frame_at(path, t);
    CHECK((f.a - Mat2::Identity()).norm() < 1e-8);
    CHECK((f.c).norm() < 1e-8);
    CHECK((f.d - Mat2::Identity()).norm() < 1e-8);
    // dx/deta at unit speed: t times the projector transverse to the ray.
    const Vec2 e(std::cos(1.0), std::sin(1.0));
    CHECK((f.b - t * projector(perp(e))).norm() < 1e-7);
}

TEST_CASE("frame near a reflection is refused") {
    const Geometry disk{1.0, 0.0};
    const auto path = trace_ray(Vec2(0.0, 0.0), UnitDirection::from_angle(0.3), 3.0, disk);
    const double tk = path.reflections()[0].time;
    CHECK(tk == doctest::Approx(1.0));
    CHECK_THROWS_AS(frame_at(path, tk + 1e-6), ReflectionAdjacent);
    const auto lim = frame_limit(path, 0, true);
    CHECK(lim.symplectic_defect() < 1e-6);
}

TEST_CASE("triangle has three focal points") {
    const Geometry disk{1.0, 0.0};
    const auto orbit = ngon_orbit(3, 1.0, 0.0, Orientation::counterclockwise);
    const auto path = trace_ray(orbit.start, orbit.direction, orbit.spec.length(), disk);
    const auto times = focal_times(path);
    REQUIRE(times.size() == 3);
    for (double t : times) {
        CHECK(std::abs(frame_at(path, t).a.determinant()) < 1e-6);
        CHECK(path.distance_to_reflection(t) > 1e-3);
    }
}

TEST_CASE("length spectrum of the unit disk") {
    const auto spec = length_spectrum({1.0, 0.0}, 9.0, 40);
    const auto values = spec.values();
    REQUIRE(!values.empty());
    CHECK(values.front() == doctest::Approx(4.0)); // bouncing diameter
    CHECK(std::is_sorted(values.begin(), values.end()));
    const double tri = 3.0 * std::sqrt(3.0);
    double nearest = 1e9;
    for (double l : values)
        if (std::abs(l - tri) > 1e-9) nearest = std::min(nearest, std::abs(l - tri));
    CHECK(nearest == doctest::Approx(4.0 * std::sqrt(2.0) - tri).epsilon(1e-12));
    CHECK(nearest >= 0.45);
    // 2 pi is the whispering-gallery limit of q = 1.
    REQUIRE(spec.accumulation_points.size() == 1);
    CHECK(spec.accumulation_points[0] == doctest::Approx(2 * kPi));
    // The doubled diameter appears as N = 4, q = 2.
    bool iterate = false;
    for (const auto& e : spec.entries) iterate = iterate || (e.sides == 4 && e.winding == 2);
    CHECK(iterate);
}

TEST_CASE("obstacle removes polygons that would cross it") {
    const auto spec = length_spectrum({1.0, 0.5}, 7.0, 20);
    for (const auto& e : spec.entries) CHECK(std::cos(kPi * e.winding / e.sides) > 0.5);
    bool has_band = false;
    for (const auto& b : spec.bands)
        has_band = has_band || (b.kind == LengthBand::Kind::obstacle && b.index == 1 &&
                                b.lower == doctest::Approx(1.0) && b.upper == doctest::Approx(3.0));
    CHECK(has_band);
}
