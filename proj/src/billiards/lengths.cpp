#include "abtrace/billiards.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abtrace::billiards {

std::vector<double> LengthSpectrum::values() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.length);
    return out;
}

LengthSpectrum length_spectrum(const Geometry& g, double l_max, int max_sides) {
    g.validate();
    if (!(l_max > 0.0)) throw std::invalid_argument("length_spectrum: l_max must be positive");
    if (max_sides < 2) throw std::invalid_argument("length_spectrum: max_sides must be >= 2");
    const double R = g.outer_radius;
    const double r0 = g.inner_radius;

    std::vector<LengthEntry> raw;
    for (int n = 2; n <= max_sides; ++n) {
        for (int q = 1; 2 * q <= n; ++q) {
            const double len = 2.0 * n * R * std::sin(kPi * q / n);
            if (len > l_max) continue;
            // Chords of an (n, q) polygon stay at distance R cos(pi q / n) from the centre.
            if (g.has_obstacle() && R * std::cos(kPi * q / n) <= r0) continue;
            raw.push_back({len, n, q, 1});
        }
    }
    std::sort(raw.begin(), raw.end(), [](const LengthEntry& x, const LengthEntry& y) {
        if (x.length != y.length) return x.length < y.length;
        if (x.sides != y.sides) return x.sides < y.sides;
        return x.winding < y.winding;
    });

    LengthSpectrum out;
    out.max_sides = max_sides;
    for (const auto& e : raw) {
        if (!out.entries.empty() && e.length - out.entries.back().length <= 1e-12)
            ++out.entries.back().multiplicity;
        else
            out.entries.push_back(e);
    }

    if (g.has_obstacle()) {
        for (int k = 1; 2.0 * k * (R - r0) <= l_max; ++k)
            out.bands.push_back({LengthBand::Kind::obstacle, k, 2.0 * k * (R - r0), 2.0 * k * (R + r0)});
    }

    // Polygons beyond max_sides with winding q have lengths between the
    // first omitted one and 2 pi R q.
    for (int q = 1;; ++q) {
        const int n = std::max(max_sides + 1, 2 * q);
        const double lower = 2.0 * n * R * std::sin(kPi * q / n);
        if (lower > l_max) break;
        const double upper = 2.0 * kPi * R * q;
        if (upper <= l_max) out.accumulation_points.push_back(upper);
        out.bands.push_back({LengthBand::Kind::whispering, q, lower, upper});
    }
    return out;
}

} // namespace abtrace::billiards
