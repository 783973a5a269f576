#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace abtrace {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CMat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using CMat3 = Eigen::Matrix3cd;
using CMat4 = Eigen::Matrix4cd;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Right-hand normal: (v1, v2) -> (v2, -v1).
inline Vec2 perp(const Vec2& v) { return {v.y(), -v.x()}; }

/// Orthogonal projection onto span{u}.
inline Mat2 projector(const Vec2& u) { return u * u.transpose() / u.squaredNorm(); }

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

} // namespace abtrace
