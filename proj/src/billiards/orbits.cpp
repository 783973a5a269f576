#include "abtrace/billiards.hpp"

#include <cmath>
#include <stdexcept>

namespace abtrace::billiards {

double OrbitSpec::side_length() const { return 2.0 * radius * std::sin(kPi / sides); }

double OrbitSpec::length() const { return sides * side_length(); }

double OrbitSpec::chord_distance() const {
    return sides == 2 ? 0.0 : radius * std::cos(kPi / sides);
}

double OrbitSpec::closure_curvature() const { return 4.0 * sides / side_length(); }

OrbitRepresentative ngon_orbit(int sides, double radius, double start_angle,
                               Orientation orientation, double offset) {
    if (sides < 2) throw std::invalid_argument("ngon_orbit: need at least 2 sides");
    if (!(radius > 0.0)) throw std::invalid_argument("ngon_orbit: radius must be positive");
    OrbitSpec spec{sides, radius, orientation, start_angle};
    if (!(std::abs(offset) < 0.5 * spec.side_length()))
        throw std::invalid_argument("ngon_orbit: offset must lie strictly inside the first side");

    const auto eta = UnitDirection::from_angle(start_angle);
    const double w = orientation == Orientation::counterclockwise ? spec.chord_distance()
                                                                  : -spec.chord_distance();
    const Vec2 z = offset * eta.vec() + w * eta.perp();
    return OrbitRepresentative{spec, z, eta, offset};
}

} // namespace abtrace::billiards
