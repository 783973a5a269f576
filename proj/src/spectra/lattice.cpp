#include "abtrace/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace abtrace {

void Lattice::validate() const {
    const double scale = e1.norm() * e2.norm();
    if (!(scale > 0.0) || !(std::abs(cross(e1, e2)) > 1e-12 * scale))
        throw std::invalid_argument("Lattice: basis vectors are linearly dependent");
}

std::array<Vec2, 2> Lattice::dual_basis() const {
    Mat2 e;
    e << e1, e2; // columns e1, e2
    const Mat2 dual = e.inverse().transpose();
    return {dual.col(0), dual.col(1)};
}

Vec2 Lattice::dual_point(long d1, long d2) const {
    const auto [f1, f2] = dual_basis();
    return double(d1) * f1 + double(d2) * f2;
}

std::optional<std::array<long, 2>> Lattice::coordinates(const Vec2& p, double tol) const {
    const auto [f1, f2] = dual_basis();
    const double c1 = p.dot(f1);
    const double c2 = p.dot(f2);
    const long m1 = std::lround(c1);
    const long m2 = std::lround(c2);
    if ((point(m1, m2) - p).norm() > tol) return std::nullopt;
    return std::array<long, 2>{m1, m2};
}

} // namespace abtrace
