#pragma once

// Planar lattices L = {m1 e1 + m2 e2} and their duals L* = {delta : delta . d in Z}.

#include "abtrace/linalg.hpp"

#include <array>
#include <optional>

namespace abtrace {

struct Lattice {
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.0, 1.0};

    /// Throws std::invalid_argument if e1, e2 are (numerically) dependent.
    void validate() const;
    double area() const { return std::abs(cross(e1, e2)); }
    /// Dual basis with e_i* . e_j = delta_ij.
    std::array<Vec2, 2> dual_basis() const;

    Vec2 point(long m1, long m2) const { return double(m1) * e1 + double(m2) * e2; }
    Vec2 dual_point(long d1, long d2) const;
    /// Integer coordinates of p if it is a lattice vector within `tol`.
    std::optional<std::array<long, 2>> coordinates(const Vec2& p, double tol = 1e-10) const;
};

} // namespace abtrace
