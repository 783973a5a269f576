#pragma once

// Zero-field magnetic potentials and their line integrals.

#include "abtrace/lattice.hpp"
#include "abtrace/linalg.hpp"

#include <span>
#include <variant>
#include <vector>

namespace abtrace {

namespace billiards {
class ReflectedRayPath;
}

/// A(x) = (alpha / 2 pi) (-(x2 - c2), x1 - c1) / |x - c|^2.
struct IdealFlux {
    double alpha = 0.0;
    Vec2 center = Vec2::Zero();
};

struct ConstantOnTorus {
    Lattice lattice;
    Vec2 a0 = Vec2::Zero();
};

/// One term Re(A_delta exp(2 pi i delta . x)); delta given by integer
/// dual-lattice coordinates.
struct FourierMode {
    long d1 = 0;
    long d2 = 0;
    Eigen::Vector2cd coefficient = Eigen::Vector2cd::Zero();
};

/// A(x) = a0 + sum over modes of Re(A_delta exp(2 pi i delta . x)).
struct FourierPeriodic {
    Lattice lattice;
    Vec2 a0 = Vec2::Zero();
    std::vector<FourierMode> modes;
};

using GaugeField = std::variant<IdealFlux, ConstantOnTorus, FourierPeriodic>;

Vec2 potential(const GaugeField& field, const Vec2& x);

/// Centred-difference curl d2 A1 - d1 A2 (the sign convention of the zero-field condition).
double curl(const GaugeField& field, const Vec2& x, double h = 1e-5);

/// Integral of A . dx along the straight segment p -> q.
/// IdealFlux uses the exact subtended angle; FourierPeriodic uses adaptive
/// Gauss-Kronrod to 1e-10. Throws DomainError if the segment meets the flux line.
double segment_integral(const GaugeField& field, const Vec2& p, const Vec2& q);

/// Integral of A . dx along a polyline.
double polyline_integral(const GaugeField& field, std::span<const Vec2> points);

/// Integral of A . dx along a billiard path between times t0 <= t1.
double path_integral(const GaugeField& field, const billiards::ReflectedRayPath& path,
                     double t0, double t1);

/// Flux through a closed polyline. For torus fields closure is modulo the
/// lattice. Throws NonClosedPath if the endpoints differ by more than `tol`.
double holonomy(const GaugeField& field, std::span<const Vec2> loop, double tol = 1e-10);

} // namespace abtrace
